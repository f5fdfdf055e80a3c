"""Exact Wigner 3j-symbols.

Quantum numbers are carried as :class:`HalfInt` (twice the value, as an
integer) so parity and selection rules are decided without floating point.
Values are returned as :class:`ExactSurd`, ``sign * sqrt(square)`` with
``square`` an exact rational.

The float-valued :func:`threej_m_row` evaluates a whole row of fixed
``(j1, j2, j3, m1)`` by the three-term recursion in ``m2``; it is the fast path
for large quantum numbers and is checked against :func:`exact_threej`.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

import numpy as np

__all__ = [
    "HalfInt",
    "ThreeJArgs",
    "ExactSurd",
    "EmptyRow",
    "selection_check",
    "exact_threej",
    "threej_float",
    "threej_m_row",
    "orthogonality_residual",
]


class EmptyRow(ValueError):
    """No admissible ``m2`` exists for the requested row."""


@dataclass(frozen=True, order=True)
class HalfInt:
    """An integer or half-integer, stored as ``twice`` its value."""

    twice: int

    @classmethod
    def of(cls, value) -> "HalfInt":
        """Coerce ints, Fractions, floats and strings such as ``"3/2"``."""
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, str):
            value = Fraction(value.strip())
        if isinstance(value, bool):
            raise TypeError("bool is not a quantum number")
        if isinstance(value, (int, np.integer)):
            return cls(2 * int(value))
        if isinstance(value, Rational):
            f = Fraction(value)
        else:
            f = Fraction(float(value))
        t = 2 * f
        if t.denominator != 1:
            raise ValueError(f"{value!r} is not an integer or half-integer")
        return cls(int(t))

    @property
    def value(self) -> Fraction:
        return Fraction(self.twice, 2)

    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def __float__(self) -> float:
        return self.twice / 2

    def __add__(self, other):
        return HalfInt(self.twice + HalfInt.of(other).twice)

    __radd__ = __add__

    def __sub__(self, other):
        return HalfInt(self.twice - HalfInt.of(other).twice)

    def __rsub__(self, other):
        return HalfInt(HalfInt.of(other).twice - self.twice)

    def __neg__(self):
        return HalfInt(-self.twice)

    def __abs__(self):
        return HalfInt(abs(self.twice))

    def __str__(self) -> str:
        if self.twice % 2 == 0:
            return str(self.twice // 2)
        return f"{self.twice}/2"

    def __repr__(self) -> str:
        return f"HalfInt({self})"


@dataclass(frozen=True)
class ThreeJArgs:
    """The six arguments of a 3j-symbol, top row ``j``, bottom row ``m``."""

    j1: HalfInt
    j2: HalfInt
    j3: HalfInt
    m1: HalfInt
    m2: HalfInt
    m3: HalfInt

    @classmethod
    def of(cls, j, m=(0, 0, 0)) -> "ThreeJArgs":
        j1, j2, j3 = (HalfInt.of(x) for x in j)
        m1, m2, m3 = (HalfInt.of(x) for x in m)
        return cls(j1, j2, j3, m1, m2, m3)

    @property
    def js(self) -> tuple[HalfInt, HalfInt, HalfInt]:
        return (self.j1, self.j2, self.j3)

    @property
    def ms(self) -> tuple[HalfInt, HalfInt, HalfInt]:
        return (self.m1, self.m2, self.m3)

    @property
    def twice(self) -> tuple[int, ...]:
        return tuple(x.twice for x in self.js + self.ms)

    def __str__(self) -> str:
        top = " ".join(str(x) for x in self.js)
        bot = " ".join(str(x) for x in self.ms)
        return f"({top}; {bot})"


@dataclass(frozen=True)
class ExactSurd:
    """``sign * sqrt(square)`` with ``square`` a nonnegative rational."""

    sign: int
    square: Fraction

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError("sign must be -1, 0 or +1")
        if self.square < 0:
            raise ValueError("square must be nonnegative")
        if (self.sign == 0) != (self.square == 0):
            raise ValueError("sign is zero exactly when square is zero")

    @classmethod
    def zero(cls) -> "ExactSurd":
        return cls(0, Fraction(0))

    def __float__(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * _sqrt_fraction(self.square)

    def __str__(self) -> str:
        if self.sign == 0:
            return "0"
        s = "+1" if self.sign > 0 else "-1"
        q = self.square
        return f"{s}*sqrt({q.numerator}/{q.denominator})"


def _sqrt_fraction(q: Fraction) -> float:
    # float(q) is correctly rounded even for huge numerators/denominators
    x = float(q)
    if x >= 2.2250738585072014e-308:
        return math.sqrt(x)
    # below the normal range: scale by an even power of two first
    k = (q.numerator.bit_length() - q.denominator.bit_length()) // 2
    return math.ldexp(math.sqrt(float(q / Fraction(2) ** (2 * k))), k)


# -- factorials -------------------------------------------------------------

_FACT = [1]
_FACT_LOCK = threading.Lock()


def _factorials(n: int) -> list[int]:
    """The shared factorial table, extended to cover ``n!``."""
    table = _FACT
    if len(table) <= n:
        with _FACT_LOCK:
            f = table[-1]
            for k in range(len(table), n + 1):
                f *= k
                table.append(f)
    return table


# -- selection rules --------------------------------------------------------

TRIANGLE = "triangle inequality violated"
M_SUM = "sum of m is not zero"
J_SUM = "j1 + j2 + j3 is not an integer"


def _pair_violation(r: int, j: HalfInt, m: HalfInt) -> str | None:
    if j.twice < 0:
        return f"j{r} is negative"
    if abs(m.twice) > j.twice:
        return f"|m{r}| > j{r}"
    if (j.twice - m.twice) % 2:
        return f"j{r} - m{r} is not an integer"
    return None


def selection_check(args: ThreeJArgs) -> list[str]:
    """List the selection rules violated by ``args`` (empty if admissible)."""
    out = []
    a, b, c = (x.twice for x in args.js)
    if a + b < c or b + c < a or c + a < b:
        out.append(TRIANGLE)
    if sum(x.twice for x in args.ms) != 0:
        out.append(M_SUM)
    if (a + b + c) % 2:
        out.append(J_SUM)
    for r, (j, m) in enumerate(zip(args.js, args.ms), start=1):
        v = _pair_violation(r, j, m)
        if v:
            out.append(v)
    return out


# -- Racah single sum -------------------------------------------------------


def exact_threej(args: ThreeJArgs) -> ExactSurd:
    """Exact 3j-symbol from the Racah single-sum formula.

    >>> str(exact_threej(ThreeJArgs.of((1, 1, 2), (0, 0, 0))))
    '+1*sqrt(2/15)'
    """
    return _exact_threej_twice(args.twice)


@lru_cache(maxsize=65536)
def _exact_threej_twice(tw: tuple[int, ...]) -> ExactSurd:
    args = ThreeJArgs(*(HalfInt(t) for t in tw))
    if selection_check(args):
        return ExactSurd.zero()
    t1, t2, t3, u1, u2, u3 = tw
    # all of these are integers once the selection rules hold
    j1pj2mj3 = (t1 + t2 - t3) // 2
    j1mj2pj3 = (t1 - t2 + t3) // 2
    mj1pj2pj3 = (-t1 + t2 + t3) // 2
    jsum1 = (t1 + t2 + t3) // 2 + 1
    a = (t3 - t2 + u1) // 2        # j3 - j2 + m1
    b = (t3 - t1 - u2) // 2        # j3 - j1 - m2
    c = j1pj2mj3                   # j1 + j2 - j3
    d = (t1 - u1) // 2             # j1 - m1
    e = (t2 + u2) // 2             # j2 + m2
    kmin = max(0, -a, -b)
    kmax = min(c, d, e)
    if kmin > kmax:
        return ExactSurd.zero()

    fac = _factorials(jsum1)
    # nested evaluation of sum_k (-1)^k t_k, t_{k+1}/t_k = p_k/q_k
    num, den = 1, 1
    for k in range(kmax - 1, kmin - 1, -1):
        p = (c - k) * (d - k) * (e - k)
        q = (k + 1) * (a + k + 1) * (b + k + 1)
        num, den = q * den - p * num, q * den
    if num == 0:
        return ExactSurd.zero()
    k = kmin
    tk_den = fac[k] * fac[a + k] * fac[b + k] * fac[c - k] * fac[d - k] * fac[e - k]

    prod = 1
    for t, u in ((t1, u1), (t2, u2), (t3, u3)):
        prod *= fac[(t + u) // 2] * fac[(t - u) // 2]
    square = Fraction(
        fac[j1pj2mj3] * fac[j1mj2pj3] * fac[mj1pj2pj3] * prod * num * num,
        fac[jsum1] * tk_den * tk_den * den * den,
    )
    phase = (t1 - t2 - u3) // 2 + kmin
    sign = (1 if num > 0 else -1) * (-1 if phase % 2 else 1)
    return ExactSurd(sign, square)


def threej_float(args: ThreeJArgs) -> float:
    """The exact 3j-symbol rounded to a float."""
    return float(exact_threej(args))


# -- orthogonality ----------------------------------------------------------


def orthogonality_residual(j1, j2, j3, m3=None) -> Fraction:
    """Exact ``(2 j3 + 1) * sum_{m1, m2} (3j)^2 - 1`` at fixed ``m3``.

    Without ``m3`` every admissible ``m3`` is checked and the residual of
    largest magnitude is returned.  Inadmissible triangles give ``-1``.
    """
    j1, j2, j3 = HalfInt.of(j1), HalfInt.of(j2), HalfInt.of(j3)
    a, b, c = j1.twice, j2.twice, j3.twice
    if a + b < c or b + c < a or c + a < b or (a + b + c) % 2:
        return Fraction(-1)
    m3s = range(-c, c + 1, 2) if m3 is None else [HalfInt.of(m3).twice]
    worst = Fraction(0)
    for u3 in m3s:
        total = Fraction(0)
        for u1 in range(-a, a + 1, 2):
            u2 = -u1 - u3
            if abs(u2) > b:
                continue
            total += _exact_threej_twice((a, b, c, u1, u2, u3)).square
        res = (c + 1) * total - 1
        if abs(res) > abs(worst):
            worst = res
    return worst


# -- three-term recursion in m2 ---------------------------------------------


def threej_m_row(j1, j2, j3, m1) -> dict[tuple[Fraction, Fraction], float]:
    """All 3j-symbols ``(j1 j2 j3; m1 m2 -m1-m2)`` of one row, as floats.

    Uses the symmetric three-term recursion in ``m2`` that follows from
    ``J1^2 = (J2 + J3)^2``, iterated inward from both ends of the row and
    matched in the classically allowed middle.  The row is normalized by
    ``(2 j1 + 1) * sum v^2 = 1`` and its sign fixed at the lowest ``m2``,
    where the Racah sum reduces to a single term.

    Returns a mapping ``(m2, m3) -> value``.
    """
    row_m2, values = _m_row_arrays(j1, j2, j3, m1)
    m1f = HalfInt.of(m1).value
    return {(m2, -m1f - m2): float(v) for m2, v in zip(row_m2, values)}


def _m_row_arrays(j1, j2, j3, m1):
    j1, j2, j3, m1 = (HalfInt.of(x) for x in (j1, j2, j3, m1))
    a, b, c, u1 = j1.twice, j2.twice, j3.twice, m1.twice
    if (a + b < c or b + c < a or c + a < b or (a + b + c) % 2
            or abs(u1) > a or (a - u1) % 2):
        raise EmptyRow(f"no admissible row for ({j1} {j2} {j3}; {m1})")
    lo = max(-b, -c - u1)
    hi = min(b, c - u1)
    if lo > hi:
        raise EmptyRow(f"no admissible m2 for ({j1} {j2} {j3}; {m1})")
    if (b - lo) % 2:
        lo += 1
    tw2 = np.arange(lo, hi + 1, 2)
    n = tw2.size
    J1, J2, J3 = a / 2, b / 2, c / 2
    m2 = tw2 / 2
    m3 = -u1 / 2 - m2
    diag = J2 * (J2 + 1) + J3 * (J3 + 1) - J1 * (J1 + 1) + 2 * m2 * m3
    # off[k] couples entries k-1 and k
    off = np.sqrt(np.clip((J2 - m2 + 1) * (J2 + m2) * (J3 + m3 + 1) * (J3 - m3), 0, None))
    off[0] = 0.0

    if n == 1:
        vals = np.ones(1)
    else:
        allowed = np.nonzero(diag[:-1] ** 2 < 4 * off[1:] * off[1:])[0]
        mid = int(allowed[allowed.size // 2]) if allowed.size else n // 2
        lo_end = min(n - 1, mid + 2)
        hi_end = max(0, mid - 2)
        fwd = _iterate(diag, off, 0, lo_end, +1)
        bwd = _iterate(diag, off, n - 1, hi_end, -1)
        window = slice(max(hi_end, 0), lo_end + 1)
        fw, bw = fwd[window], bwd[window]
        scale = float(fw @ bw) / float(bw @ bw)
        vals = np.empty(n)
        vals[: mid + 1] = fwd[: mid + 1]
        vals[mid + 1:] = scale * bwd[mid + 1:]

    vals /= math.sqrt((a + 1) * float(vals @ vals))
    first = _exact_threej_sign_single_term(a, b, c, u1, int(tw2[0]))
    if np.sign(vals[0]) != first:
        vals = -vals
    return [Fraction(int(t), 2) for t in tw2], vals


def _iterate(diag, off, start, stop, step):
    """Run the recursion from ``start`` toward ``stop``; unused slots are 0."""
    n = diag.size
    f = np.zeros(n)
    f[start] = 1.0
    if step > 0:
        # off[k+1] f[k+1] = -(diag[k] f[k] + off[k] f[k-1])
        for k in range(start, stop):
            prev = f[k - 1] if k > 0 else 0.0
            f[k + 1] = -(diag[k] * f[k] + off[k] * prev) / off[k + 1]
            if abs(f[k + 1]) > 1e200:
                f[: k + 2] *= 1e-200
    else:
        # off[k] f[k-1] = -(diag[k] f[k] + off[k+1] f[k+1])
        for k in range(start, stop, -1):
            nxt = f[k + 1] if k < n - 1 else 0.0
            nxt_off = off[k + 1] if k < n - 1 else 0.0
            f[k - 1] = -(diag[k] * f[k] + nxt_off * nxt) / off[k]
            if abs(f[k - 1]) > 1e200:
                f[k - 1:] *= 1e-200
    return f


def _exact_threej_sign_single_term(a, b, c, u1, u2) -> int:
    """Sign of the symbol at the lowest ``m2`` of a row.

    There either ``m2 = -j2`` or ``m3 = j3`` and the Racah sum has a single
    term, so the sign is a pure phase.
    """
    u3 = -u1 - u2
    kmin = max(0, -(c - b + u1) // 2, -(c - a - u2) // 2)
    phase = (a - b - u3) // 2 + kmin
    return -1 if phase % 2 else 1
