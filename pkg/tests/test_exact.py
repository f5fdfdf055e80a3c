import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from semi3j.exact import (
    EmptyRow,
    ExactSurd,
    HalfInt,
    ThreeJArgs,
    exact_threej,
    orthogonality_residual,
    selection_check,
    threej_float,
    threej_m_row,
)


def racah_brute(j1, j2, j3, m1, m2, m3):
    """Independent oracle: the Racah sum in Fractions with math.factorial."""
    f = math.factorial
    if m1 + m2 + m3 != 0:
        return Fraction(0)
    vals = [j1 + j2 - j3, j1 - j2 + j3, -j1 + j2 + j3, j1 + m1, j1 - m1,
            j2 + m2, j2 - m2, j3 + m3, j3 - m3]
    if any(v < 0 or Fraction(v).denominator != 1 for v in vals):
        return Fraction(0)
    tri = Fraction(f(int(j1 + j2 - j3)) * f(int(j1 - j2 + j3)) * f(int(-j1 + j2 + j3)),
                   f(int(j1 + j2 + j3 + 1)))
    pre = tri * f(int(j1 + m1)) * f(int(j1 - m1)) * f(int(j2 + m2)) * f(int(j2 - m2)) \
        * f(int(j3 + m3)) * f(int(j3 - m3))
    total = Fraction(0)
    for k in range(0, int(j1 + j2 + j3) + 2):
        d = [k, j3 - j2 + k + m1, j3 - j1 + k - m2, j1 + j2 - j3 - k, j1 - k - m1, j2 - k + m2]
        if any(x < 0 for x in d):
            continue
        den = 1
        for x in d:
            den *= f(int(x))
        total += Fraction((-1) ** k, den)
    phase = -1 if int(j1 - j2 - m3) % 2 else 1
    # return the signed square
    return phase * (1 if total >= 0 else -1) * pre * total * total


def all_args(max_twice):
    for a, b, c in itertools.product(range(max_twice + 1), repeat=3):
        if (a + b + c) % 2 or c < abs(a - b) or c > a + b:
            continue
        for u1 in range(-a, a + 1, 2):
            for u2 in range(-b, b + 1, 2):
                u3 = -u1 - u2
                if abs(u3) <= c:
                    yield ThreeJArgs(*(HalfInt(t) for t in (a, b, c, u1, u2, u3)))


def signed_square(s: ExactSurd) -> Fraction:
    return s.sign * s.square


@pytest.mark.parametrize(
    "j, m, sign, square",
    [
        ((0, 0, 0), (0, 0, 0), 1, Fraction(1)),
        ((1, 1, 0), (1, -1, 0), 1, Fraction(1, 3)),
        ((1, 1, 2), (0, 0, 0), 1, Fraction(2, 15)),
        ((2, 2, 2), (0, 0, 0), -1, Fraction(2, 35)),
        ((1, 1, 3), (0, 0, 0), 0, Fraction(0)),
    ],
)
def test_known_values(j, m, sign, square):
    s = exact_threej(ThreeJArgs.of(j, m))
    assert (s.sign, s.square) == (sign, square)


def test_float_value():
    assert threej_float(ThreeJArgs.of((0, 0, 0))) == 1.0
    assert threej_float(ThreeJArgs.of((1, 1, 2))) == pytest.approx(0.3651483717, abs=1e-10)
    assert threej_float(ThreeJArgs.of((1, 1, 3))) == 0.0


def test_surd_text():
    assert str(exact_threej(ThreeJArgs.of((1, 1, 2)))) == "+1*sqrt(2/15)"
    assert str(exact_threej(ThreeJArgs.of((2, 2, 2)))) == "-1*sqrt(2/35)"
    assert str(ExactSurd.zero()) == "0"


def test_surd_validation():
    with pytest.raises(ValueError):
        ExactSurd(0, Fraction(1))
    with pytest.raises(ValueError):
        ExactSurd(1, Fraction(-1))


def test_selection_rules():
    assert selection_check(ThreeJArgs.of((0, 0, 0))) == []
    assert any("triangle" in v for v in selection_check(ThreeJArgs.of((1, 1, 3))))
    assert selection_check(ThreeJArgs.of((1, 1, 1), (1, -1, 1)))


def test_halfint_parsing():
    assert HalfInt.of("3/2").twice == 3
    assert HalfInt.of(Fraction(5, 2)) == HalfInt(5)
    assert HalfInt.of(2.5).twice == 5
    with pytest.raises(ValueError):
        HalfInt.of("1/3")
    assert str(HalfInt(3)) == "3/2" and str(HalfInt(-4)) == "-2"


def test_matches_brute_force_racah():
    for args in all_args(6):
        j = [Fraction(x.twice, 2) for x in args.js]
        m = [Fraction(x.twice, 2) for x in args.ms]
        assert signed_square(exact_threej(args)) == racah_brute(*j, *m), str(args)


def test_accidental_zero_is_exact():
    # zeros with every selection rule satisfied, e.g. odd sum at m = 0
    zeros = [a for a in all_args(8) if not selection_check(a) and exact_threej(a).sign == 0]
    assert zeros
    for a in zeros:
        s = exact_threej(a)
        assert s.square == 0 and float(s) == 0.0


def _perm_sign(args, perm):
    tw = args.twice
    js = [tw[p] for p in perm]
    ms = [tw[3 + p] for p in perm]
    return ThreeJArgs(*(HalfInt(t) for t in js + ms))


def test_symmetries_exhaustive():
    even = [(1, 2, 0), (2, 0, 1)]
    odd = [(1, 0, 2), (0, 2, 1), (2, 1, 0)]
    for args in all_args(8):
        s = signed_square(exact_threej(args))
        jsum = sum(x.twice for x in args.js) // 2
        phase = -1 if jsum % 2 else 1
        for p in even:
            assert signed_square(exact_threej(_perm_sign(args, p))) == s
        for p in odd:
            assert signed_square(exact_threej(_perm_sign(args, p))) == phase * s
        flipped = ThreeJArgs(*args.js, *(-x for x in args.ms))
        assert signed_square(exact_threej(flipped)) == phase * s


@pytest.mark.parametrize("j", [(1, 1, 2), (Fraction(1, 2), Fraction(1, 2), 1), (3, 4, 5),
                               (Fraction(5, 2), 2, Fraction(7, 2))])
def test_orthogonality_examples(j):
    assert orthogonality_residual(*j) == 0


def test_orthogonality_empty():
    assert orthogonality_residual(1, 1, 3) == -1


def test_orthogonality_all_small():
    for a, b, c in itertools.product(range(11), repeat=3):
        if (a + b + c) % 2 or c < abs(a - b) or c > a + b:
            continue
        assert orthogonality_residual(HalfInt(a), HalfInt(b), HalfInt(c)) == 0


def test_row_examples():
    row = threej_m_row(1, 1, 0, 1)
    assert list(row) == [(Fraction(-1), Fraction(0))]
    assert row[(-1, 0)] == pytest.approx(1 / math.sqrt(3), abs=1e-14)
    row = threej_m_row(1, 1, 2, 0)
    assert row[(0, 0)] == pytest.approx(math.sqrt(2 / 15), abs=1e-14)
    with pytest.raises(EmptyRow):
        threej_m_row(1, 1, 3, 0)


def _check_row(j1, j2, j3, m1):
    row = threej_m_row(j1, j2, j3, m1)
    top = max(abs(v) for v in row.values())
    for (m2, m3), v in row.items():
        ex = threej_float(ThreeJArgs.of((j1, j2, j3), (m1, m2, m3)))
        assert abs(v - ex) <= 1e-10 * top, (j1, j2, j3, m1, m2)


@pytest.mark.parametrize("j, m1", [
    ((110, 100, 120), -20),
    ((Fraction(201, 2), Fraction(199, 2), 60), Fraction(7, 2)),
    ((480, 500, 520), 10),
    ((Fraction(5, 2), 3, Fraction(7, 2)), Fraction(-3, 2)),
])
def test_row_matches_exact(j, m1):
    _check_row(*j, m1)


triples = st.tuples(st.integers(0, 60), st.integers(0, 60), st.integers(0, 60)).filter(
    lambda t: (sum(t) % 2 == 0) and abs(t[0] - t[1]) <= t[2] <= t[0] + t[1])


@settings(max_examples=60, deadline=None)
@given(triples, st.data())
def test_row_matches_exact_random(tw, data):
    a = tw[0]
    u1 = data.draw(st.integers(0, a)) * 2 - a
    args = [Fraction(t, 2) for t in tw]
    try:
        _check_row(*args, Fraction(u1, 2))
    except EmptyRow:
        pass


@settings(max_examples=200, deadline=None)
@given(triples, st.data())
def test_brute_force_random(tw, data):
    a, b, c = tw
    u1 = data.draw(st.integers(0, a)) * 2 - a
    u2 = data.draw(st.integers(0, b)) * 2 - b
    u3 = -u1 - u2
    args = ThreeJArgs(*(HalfInt(t) for t in (a, b, c, u1, u2, u3)))
    j = [Fraction(t, 2) for t in tw]
    m = [Fraction(u1, 2), Fraction(u2, 2), Fraction(u3, 2)]
    if abs(u3) > c:
        assert exact_threej(args).sign == 0
    else:
        assert signed_square(exact_threej(args)) == racah_brute(*j, *m)


def test_large_values_are_normalized():
    row = threej_m_row(300, 320, 340, 5)
    total = sum(v * v for v in row.values())
    assert (2 * 300 + 1) * total == pytest.approx(1.0, rel=1e-12)
    assert np.isfinite(list(row.values())).all()
