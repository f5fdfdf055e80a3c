"""Ponzano-Regge asymptotics of the 3j-symbol.

For quantum numbers ``j^qu`` the classical contour values are
``j = j^qu + 1/2`` (``m`` is unchanged).  In the classically allowed region

    3j ~ sign * cos(S + pi/4) / sqrt(2 pi Delta_z)

where ``S = sum_r (j_r psi_r + m_r phi_r)`` is the jm-torus action to the
principal intersection with the Wigner manifold and ``Delta_z`` is the area of
the triangle projected on the x-y plane.  The overall sign is a rule of the form
``(-1)^(a j1 + b j2 + c j3 + d m1 + e m2 + f m3 + g)`` which is fixed by
:func:`calibrate_prefactor` against the exact symbols; the outcome is stored as
:data:`CALIBRATED_RULE`.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .exact import HalfInt, ThreeJArgs, exact_threej, selection_check
from .geometry import (
    CAUSTIC_BAND,
    NotAllowed,
    Region,
    TriangleViolation,
    classify_region,
    orientation,
    projected_area,
    rotated_config,
    triangle_shape,
)

__all__ = [
    "ActionAngles",
    "AsymptoticResult",
    "SignRule",
    "DEFAULT_RULE",
    "CALIBRATED_RULE",
    "Calibration",
    "DegeneratePerp",
    "NoConsistentRule",
    "GridPrecondition",
    "action_angles",
    "action_phase",
    "action_phase_arccos",
    "asymptotic_threej",
    "calibrate_prefactor",
    "sample_calibration_grid",
]


class DegeneratePerp(ValueError):
    """Some ``J_r`` is parallel to the z-axis."""


class NoConsistentRule(RuntimeError):
    """No sign rule reaches the agreement threshold."""

    def __init__(self, msg, best=None, agreement=None):
        super().__init__(msg)
        self.best = best
        self.agreement = agreement


class GridPrecondition(ValueError):
    """A calibration grid entry violates the grid preconditions."""


@dataclass(frozen=True)
class ActionAngles:
    psi1: float
    psi2: float
    psi3: float
    phi1: float
    phi2: float
    phi3: float = 0.0

    @property
    def psi(self) -> tuple[float, float, float]:
        return (self.psi1, self.psi2, self.psi3)

    @property
    def phi(self) -> tuple[float, float, float]:
        return (self.phi1, self.phi2, self.phi3)


@dataclass(frozen=True)
class SignRule:
    """``(-1)^(c . (j1, j2, j3, m1, m2, m3) + g)`` on quantum numbers."""

    coeffs: tuple[int, int, int, int, int, int]
    const: int = 0

    def twice_exponent(self, args: ThreeJArgs) -> int:
        return sum(c * t for c, t in zip(self.coeffs, args.twice)) + 2 * self.const

    def applies(self, args: ThreeJArgs) -> bool:
        return self.twice_exponent(args) % 2 == 0

    def sign(self, args: ThreeJArgs) -> int:
        t = self.twice_exponent(args)
        if t % 2:
            raise ValueError(f"{self} has a non-integer exponent at {args}")
        return -1 if (t // 2) % 2 else 1

    def __str__(self) -> str:
        names = ("j1", "j2", "j3", "m1", "m2", "m3")
        terms = []
        for c, name in zip(self.coeffs, names):
            if c:
                terms.append(("+ " if c > 0 else "- ") + (f"{abs(c)}*" if abs(c) != 1 else "") + name)
        if self.const:
            terms.append(("+ " if self.const > 0 else "- ") + str(abs(self.const)))
        if not terms:
            return "(-1)^0"
        s = " ".join(terms)
        s = s[2:] if s.startswith("+ ") else "-" + s[2:]
        return f"(-1)^({s})"


# first candidate tried by the calibration (standard Wigner-convention guess)
DEFAULT_RULE = SignRule((1, -1, 0, 0, 0, -1))
# the rule the calibration selects on integer and half-integer grids
CALIBRATED_RULE = SignRule((1, 1, -1, 0, 0, 0), 1)


@dataclass(frozen=True)
class AsymptoticResult:
    """Leading-order value; ``value`` is ``None`` off the allowed region."""

    value: float | None
    S: float | None
    amplitude: float | None
    region: Region | None
    prefactor_sign: int
    delta_z: float | None = None


def _perp(j, m):
    p = [math.sqrt(max(0.0, jr * jr - mr * mr)) for jr, mr in zip(j, m)]
    if min(p) < 1e-12:
        raise DegeneratePerp(f"some J_r is along z for j = {j}, m = {m}")
    return p


def _acos(x: float) -> float:
    return math.acos(min(1.0, max(-1.0, x)))


def action_angles(j: Sequence[float], m: Sequence[float], band: float = CAUSTIC_BAND) -> ActionAngles:
    """Closed-form ``psi_r``, ``phi_r`` of the principal intersection point."""
    j = tuple(float(x) for x in j)
    m = tuple(float(x) for x in m)
    if classify_region(j, m, band) is not Region.ALLOWED:
        raise NotAllowed(f"j = {j}, m = {m} is not classically allowed")
    if all(x == 0.0 for x in m):
        s = triangle_shape(j)
        h = math.pi / 2
        return ActionAngles(h, h, h, s.eta2, -s.eta1)
    perp = _perp(j, m)
    area = triangle_shape(j).area
    psi = []
    for r in range(3):
        a, b = (r + 1) % 3, (r + 2) % 3
        num = j[r] ** 2 * (m[b] - m[a]) + m[r] * (j[b] ** 2 - j[a] ** 2)
        psi.append(_acos(num / (4 * area * perp[r])))
    j1, j2, j3 = j
    m1, m2, m3 = m
    phi1 = _acos((j2 ** 2 - j3 ** 2 - j1 ** 2 - 2 * m1 * m3) / (2 * perp[0] * perp[2]))
    phi2 = -_acos((j1 ** 2 - j3 ** 2 - j2 ** 2 - 2 * m2 * m3) / (2 * perp[1] * perp[2]))
    return ActionAngles(psi[0], psi[1], psi[2], phi1, phi2)


def action_phase(j, m, band: float = CAUSTIC_BAND) -> float:
    """``S = sum_r (j_r psi_r + m_r phi_r)`` on the principal branch."""
    ang = action_angles(j, m, band)
    return sum(float(jr) * p for jr, p in zip(j, ang.psi)) + sum(
        float(mr) * p for mr, p in zip(m, ang.phi))


def action_phase_arccos(j, m) -> float:
    """The same action written with the Euler angles ``beta`` and ``gamma``."""
    j1, j2, j3 = (float(x) for x in j)
    m1, m2, m3 = (float(x) for x in m)
    s = triangle_shape((j1, j2, j3))
    o = orientation((j1, j2, j3), (m1, m2, m3))
    p1, p2, _ = _perp((j1, j2, j3), (m1, m2, m3))
    cb, sb = math.cos(o.beta), math.sin(o.beta)
    c1, s1 = math.cos(s.eta1), math.sin(s.eta1)
    c2, s2 = math.cos(s.eta2), math.sin(s.eta2)
    return (
        j1 * _acos((j1 * cb - m1 * c2) / (s2 * p1))
        + j2 * _acos((m2 * c1 - j2 * cb) / (s1 * p2))
        + j3 * _acos((j1 * cb * c2 - m1) / (j1 * sb * s2))
        + m1 * _acos((j1 * c2 - m1 * cb) / (sb * p1))
        - m2 * _acos((j2 * c1 - m2 * cb) / (sb * p2))
    )


def _cos_phase_m0(args: ThreeJArgs) -> float:
    # all m = 0: S + pi/4 = (pi/2) n + pi, n = j1 + j2 + j3 (quantum numbers)
    n = sum(x.twice for x in args.js) // 2
    return (-1.0, 0.0, 1.0, 0.0)[n % 4]


def asymptotic_threej(args: ThreeJArgs, rule: SignRule = CALIBRATED_RULE,
                      band: float = CAUSTIC_BAND) -> AsymptoticResult:
    """Ponzano-Regge value of the 3j-symbol ``args`` (quantum numbers).

    Inadmissible symbols give ``value = 0``.  Forbidden and caustic points give
    ``value = None`` with the region recorded.
    """
    j = tuple(float(x) + 0.5 for x in args.js)
    m = tuple(float(x) for x in args.ms)
    sign = rule.sign(args) if rule.applies(args) else 1
    violations = selection_check(args)
    try:
        region = classify_region(j, m, band)
    except (TriangleViolation, ValueError):
        region = None
    if violations:
        return AsymptoticResult(0.0, None, None, region, sign)
    if region is not Region.ALLOWED:
        return AsymptoticResult(None, None, None, region, sign)
    S = action_phase(j, m, band)
    dz = projected_area(rotated_config(j, m, band=band))
    amp = 1.0 / math.sqrt(2 * math.pi * dz)
    if all(x.twice == 0 for x in args.ms):
        c = _cos_phase_m0(args)
    else:
        c = math.cos(S + math.pi / 4)
    return AsymptoticResult(sign * c * amp, S, amp, region, sign, dz)


# -- sign calibration -------------------------------------------------------


def _grid_entry_ok(args: ThreeJArgs, band: float, min_cos: float, max_cos_gamma: float):
    if selection_check(args):
        return False, "inadmissible"
    tw = [x.twice for x in args.js]
    if min(tw) < 20 or max(tw) > 200:
        return False, "2j outside [20, 200]"
    j = tuple(float(x) + 0.5 for x in args.js)
    m = tuple(float(x) for x in args.ms)
    if classify_region(j, m, band) is not Region.ALLOWED:
        return False, "not allowed"
    if abs(orientation(j, m).cos_gamma) > max_cos_gamma:
        return False, "near caustic"
    if abs(math.cos(action_phase(j, m) + math.pi / 4)) <= min_cos:
        return False, "small cosine"
    return True, ""


def sample_calibration_grid(n: int = 500, seed: int = 0, integer_j: bool = True,
                            min_cos: float = 0.3, max_cos_gamma: float = 0.9,
                            band: float = CAUSTIC_BAND) -> list[ThreeJArgs]:
    """Random admissible symbols with ``2j`` in ``[20, 200]`` that satisfy the
    calibration preconditions."""
    rng = np.random.default_rng(seed)
    out: list[ThreeJArgs] = []
    seen = set()
    while len(out) < n:
        if integer_j:
            tw = [2 * int(x) for x in rng.integers(10, 101, size=3)]
        else:
            tw = [int(x) for x in rng.integers(20, 201, size=3)]
        if sum(tw) % 2:
            continue
        u1 = -tw[0] + 2 * int(rng.integers(0, tw[0] + 1))
        u2 = -tw[1] + 2 * int(rng.integers(0, tw[1] + 1))
        args = ThreeJArgs(*(HalfInt(t) for t in (*tw, u1, u2, -u1 - u2)))
        if args.twice in seen or selection_check(args):
            continue
        ok, _ = _grid_entry_ok(args, band, min_cos, max_cos_gamma)
        if ok:
            seen.add(args.twice)
            out.append(args)
    return out


@dataclass(frozen=True)
class Calibration:
    """Outcome of :func:`calibrate_prefactor`.

    ``equivalent`` counts the candidate rules that give the same signs as
    ``rule`` on every grid entry; on an integer-j grid every rule differing
    only by even multiples of the arguments is indistinguishable.
    """

    rule: SignRule
    agreement: float
    n: int
    n_integer: int
    equivalent: int


def _candidates() -> list[SignRule]:
    rules = [SignRule(tuple(c[:6]), c[6])
             for c in itertools.product((0, 1, -1), repeat=7) if c[6] in (0, 1)]
    # simplest first; positive coefficients before negative ones
    rules.sort(key=lambda r: (sum(1 for c in r.coeffs if c), r.const,
                              tuple(0 if c == 0 else (1 if c > 0 else 2) for c in r.coeffs)))
    rules.remove(DEFAULT_RULE)
    return [DEFAULT_RULE] + rules


def calibrate_prefactor(grid: Iterable[ThreeJArgs], threshold: float = 0.999,
                        band: float = CAUSTIC_BAND, min_cos: float = 0.3,
                        max_cos_gamma: float = 0.9) -> Calibration:
    """Find the sign rule that matches the exact symbols on ``grid``.

    Candidates ``(-1)^(a j1 + b j2 + c j3 + d m1 + e m2 + f m3 + g)`` with
    coefficients in ``{-1, 0, 1}`` and ``g`` in ``{0, 1}`` are scored on the
    integer-j entries first, :data:`DEFAULT_RULE` first and then by
    simplicity.  Rules reaching ``threshold`` there are then scored on the
    whole grid (a rule must give an integer exponent on every entry), and the
    first survivor is returned.
    """
    grid = list(grid)
    if not grid:
        raise GridPrecondition("empty calibration grid")
    for args in grid:
        ok, why = _grid_entry_ok(args, band, min_cos, max_cos_gamma)
        if not ok:
            raise GridPrecondition(f"{args}: {why}")
    tw = np.array([a.twice for a in grid], dtype=np.int64)          # (n, 6)
    target = np.empty(len(grid), dtype=np.int64)
    unsigned = SignRule((0,) * 6)
    for i, args in enumerate(grid):
        res = asymptotic_threej(args, unsigned, band)
        target[i] = exact_threej(args).sign * (1 if res.value > 0 else -1)
    integer = np.all(tw[:, :3] % 2 == 0, axis=1)

    def signs(rule: SignRule, rows):
        t = tw[rows] @ np.array(rule.coeffs) + 2 * rule.const
        if np.any(t % 2):
            return None
        return np.where((t // 2) % 2, -1, 1)

    def score(rule: SignRule, rows):
        s = signs(rule, rows)
        return None if s is None else float(np.mean(s == target[rows]))

    candidates = _candidates()
    stage = integer if integer.any() else np.ones(len(grid), dtype=bool)
    best, best_score = None, -1.0
    for rule in candidates:
        sc = score(rule, stage)
        if sc is None:
            continue
        if sc >= threshold:
            full = score(rule, slice(None))
            if full is not None and full >= threshold:
                best, best_score = rule, full
                break
            sc = min(sc, full if full is not None else 0.0)
        if sc > best_score:
            best, best_score = rule, sc
    if best_score < threshold:
        raise NoConsistentRule(
            f"best rule {best} agrees on {best_score:.4f} of the grid", best, best_score)
    ref = signs(best, slice(None))
    equivalent = 0
    for rule in candidates:
        s = signs(rule, slice(None))
        if s is not None and np.array_equal(s, ref):
            equivalent += 1
    return Calibration(best, best_score, len(grid), int(integer.sum()), equivalent)
