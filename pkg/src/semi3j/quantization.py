"""Bohr-Sommerfeld data for the jm-torus and the Wigner manifold.

Basis contours are built from the closed-form flows of
:mod:`semi3j.schwinger`.  Their actions come from the action integral and
their Maslov indices from twice the winding number of ``det M`` along the
contour, where

    M_{k, (r mu)} = (i/2) (conj(z)^T G_k)_{r mu}

and ``G_k`` are the generators of the functions whose level set is the
manifold: ``(I_r, J_rz)`` on the jm-torus and ``(I_r, J_x, J_y, J_z)`` on the
Wigner manifold.  Constant factors of ``det M`` play no part in the winding
and are kept as is.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exact import HalfInt
from .schwinger import (
    SIGMA,
    Flow,
    apply_su2,
    evolve,
    flow_action_integral,
    flow_generator,
    jm_reference,
    project,
    wigner_reference,
)

__all__ = [
    "V_JM",
    "V_WIGNER",
    "V_I",
    "BadSpec",
    "DegenerateBasePoint",
    "BSReport",
    "ContourSpec",
    "ContourData",
    "QuantizeReport",
    "HomotopyResult",
    "contour_values",
    "bs_check",
    "contour_path",
    "basis_contour_data",
    "maslov_winding",
    "contour_action",
    "homotopy_consistency",
    "quantize",
    "random_jm_base",
    "random_wigner_base",
    "random_su2",
]

# volume of the jm-torus in the angles (psi, phi)
V_JM = (2 * math.pi) ** 3 * (4 * math.pi) ** 3
# volume of the Wigner manifold, which covers SO(3) x torus twice
V_WIGNER = 2 ** 9 * math.pi ** 5
# volume of the four-angle torus, halved by the identification of z and -z
V_I = 0.5 * (4 * math.pi) ** 4

MANIFOLDS = ("jm", "wigner")
KINDS = ("first", "second", "c4")
SAMPLES_PER_4PI = 2000


class BadSpec(ValueError):
    """The contour description is inconsistent."""


class DegenerateBasePoint(ValueError):
    """``det M`` vanishes (or nearly) at the base point."""


# -- quantum numbers ---------------------------------------------------------


def contour_values(jqu: Sequence) -> tuple[Fraction, Fraction, Fraction]:
    """Classical contour values ``j_r = j_r^qu + 1/2`` as exact fractions."""
    out = []
    for x in jqu:
        h = HalfInt.of(x)
        if h.twice < 0:
            raise ValueError(f"negative quantum number {h}")
        out.append(Fraction(h.twice + 1, 2))
    return tuple(out)


@dataclass(frozen=True)
class BSReport:
    range_ok: bool
    sum_integer: bool
    triangle: bool
    m_sum_zero: bool

    @property
    def passed(self) -> bool:
        return self.range_ok and self.sum_integer and self.triangle and self.m_sum_zero

    def failures(self) -> list[str]:
        names = ("range_ok", "sum_integer", "triangle", "m_sum_zero")
        return [n for n in names if not getattr(self, n)]


def bs_check(jqu: Sequence, m: Sequence) -> BSReport:
    """Quantization rules on quantum numbers; passes exactly when
    :func:`semi3j.exact.selection_check` does."""
    j = [HalfInt.of(x).twice for x in jqu]
    mm = [HalfInt.of(x).twice for x in m]
    range_ok = all(t >= 0 and abs(u) <= t and (t - u) % 2 == 0 for t, u in zip(j, mm))
    sum_integer = sum(j) % 2 == 0
    j1, j2, j3 = j
    triangle = abs(j1 - j2) <= j3 <= j1 + j2
    return BSReport(range_ok, sum_integer, triangle, sum(mm) == 0)


# -- contours ---------------------------------------------------------------


@dataclass(frozen=True)
class ContourSpec:
    """A basis contour through ``base``.

    ``manifold`` is ``"jm"`` or ``"wigner"``; ``kind`` is ``"first"``
    (``psi_r`` over ``4 pi``), ``"second"`` (``psi_r`` then ``phi_r``, each over
    ``2 pi``; jm-torus only) or ``"c4"`` (a ``2 pi`` rotation then half of the
    torus; Wigner manifold only).  ``axis`` is the rotation axis of ``c4``.
    """

    manifold: str
    kind: str
    base: np.ndarray = field(repr=False)
    r: int | None = None
    axis: tuple[float, float, float] = (0.0, 0.0, 1.0)

    def __post_init__(self):
        object.__setattr__(self, "base", np.asarray(self.base, dtype=complex))

    @property
    def j(self) -> np.ndarray:
        return project(self.base)[1]

    @property
    def m(self) -> np.ndarray:
        return project(self.base)[0][:, 2]


@dataclass(frozen=True)
class ContourData:
    action: float
    maslov: int


def _validate(spec: ContourSpec, tol: float = 1e-9) -> None:
    if spec.manifold not in MANIFOLDS:
        raise BadSpec(f"unknown manifold {spec.manifold!r}")
    if spec.kind not in KINDS:
        raise BadSpec(f"unknown contour kind {spec.kind!r}")
    if spec.base.shape != (3, 2):
        raise BadSpec(f"base must be three spinors, got shape {spec.base.shape}")
    if spec.kind == "c4":
        if spec.manifold != "wigner":
            raise BadSpec("C4 is a Wigner-manifold contour")
    elif spec.r not in (1, 2, 3):
        raise BadSpec(f"contour {spec.kind!r} needs r in 1..3")
    if spec.kind == "second" and spec.manifold != "jm":
        raise BadSpec("the second basis contours belong to the jm-torus")
    if spec.manifold == "wigner":
        J, I = project(spec.base)
        if np.linalg.norm(J.sum(axis=0)) > tol * max(1.0, float(I.sum())):
            raise BadSpec("base point is not on the Wigner manifold (J != 0)")


def contour_path(spec: ContourSpec) -> list[Flow]:
    """The flows whose concatenation is the contour."""
    _validate(spec)
    four_pi, two_pi = 4 * math.pi, 2 * math.pi
    if spec.kind == "first":
        return [Flow("I_r", four_pi, r=spec.r)]
    if spec.kind == "second":
        return [Flow("I_r", two_pi, r=spec.r), Flow("J_rz", two_pi, r=spec.r)]
    # a 2 pi rotation takes z -> -z; each I_r over 2 pi restores one spinor
    return [Flow("n.J", two_pi, axis=tuple(spec.axis))] + [
        Flow("I_r", two_pi, r=r) for r in (1, 2, 3)]


def basis_contour_data(spec: ContourSpec) -> ContourData:
    """Analytic action and Maslov index of a basis contour."""
    _validate(spec)
    j, m = spec.j, spec.m
    if spec.kind == "first":
        return ContourData(4 * math.pi * float(j[spec.r - 1]), 4)
    if spec.kind == "second":
        r = spec.r - 1
        return ContourData(2 * math.pi * float(j[r] + m[r]), 2)
    return ContourData(2 * math.pi * float(j.sum()), 6)


def _observable_generators(manifold: str) -> np.ndarray:
    """Stack of generators ``G_k``, shape ``(6, 3, 2, 2)``."""
    G = np.zeros((6, 3, 2, 2), dtype=complex)
    for r in range(3):
        G[r, r] = np.eye(2)
    if manifold == "jm":
        for r in range(3):
            G[3 + r, r] = SIGMA[2]
    else:
        for a in range(3):
            G[3 + a, :] = SIGMA[a]
    return G


def _det_m(zt: np.ndarray, G: np.ndarray) -> np.ndarray:
    # zt: (T, 3, 2) -> det M for every sample
    M = 0.5j * np.einsum("trn,krnm->tkrm", np.conj(zt), G)
    return np.linalg.det(M.reshape(zt.shape[0], 6, 6))


def maslov_winding(spec: ContourSpec, samples_per_4pi: int = SAMPLES_PER_4PI,
                   rel_tol: float = 1e-8) -> int:
    """Maslov index ``2 wn(det M)`` traced numerically along the contour."""
    path = contour_path(spec)
    G = _observable_generators(spec.manifold)
    z = spec.base
    scale = float(np.max(np.abs(z))) ** 6
    d0 = _det_m(z[None], G)[0]
    if abs(d0) < rel_tol * scale:
        raise DegenerateBasePoint(f"|det M| = {abs(d0):.3g} at the base point")
    phases = [np.angle(d0)]
    for leg in path:
        n = max(1000, int(math.ceil(samples_per_4pi * abs(leg.angle) / (4 * math.pi))))
        t = np.linspace(0.0, leg.angle, n + 1)
        zt = evolve(z, flow_generator(leg, 3), t)
        d = _det_m(zt, G)
        if np.min(np.abs(d)) < rel_tol * scale:
            raise DegenerateBasePoint("det M vanishes along the contour")
        phases.extend(np.angle(d[1:]))
        z = zt[-1]
    total = np.unwrap(np.asarray(phases))
    turns = (total[-1] - total[0]) / (2 * math.pi)
    wn = int(round(turns))
    if abs(turns - wn) > 1e-6:
        raise BadSpec(f"contour does not close (winding {turns:.6f})")
    return 2 * wn


def contour_action(spec: ContourSpec, steps: int = 2000) -> float:
    """``Im integral z dz-bar`` along the contour."""
    return flow_action_integral(spec.base, contour_path(spec), steps=steps)


@dataclass(frozen=True)
class HomotopyResult:
    action_c4: float
    action_sum: float
    maslov_c4: int
    maslov_sum: int
    rel_tol: float

    @property
    def action_ok(self) -> bool:
        return abs(2 * self.action_c4 - self.action_sum) <= self.rel_tol * abs(self.action_sum)

    @property
    def maslov_ok(self) -> bool:
        return 2 * self.maslov_c4 == self.maslov_sum

    @property
    def passed(self) -> bool:
        return self.action_ok and self.maslov_ok


def homotopy_consistency(base, axis=(0.0, 0.0, 1.0), rel_tol: float = 1e-10) -> HomotopyResult:
    """Check ``2 C4 = C1 + C2 + C3`` on actions and Maslov indices."""
    c4 = ContourSpec("wigner", "c4", base, axis=axis)
    cr = [ContourSpec("wigner", "first", base, r=r) for r in (1, 2, 3)]
    return HomotopyResult(
        contour_action(c4),
        sum(contour_action(c) for c in cr),
        maslov_winding(c4),
        sum(maslov_winding(c) for c in cr),
        rel_tol,
    )


# -- quantization conditions -------------------------------------------------


@dataclass(frozen=True)
class QuantizeReport:
    """Outcome of the Bohr-Sommerfeld conditions on contour values.

    ``conditions`` maps a condition name to whether it holds; ``nearest`` is
    the closest ``(j, m)`` satisfying all of them (``m`` is ``None`` if no
    ``m`` was given).
    """

    manifold: str
    conditions: dict
    nearest_j: tuple[float, float, float]
    nearest_m: tuple[float, float, float] | None

    @property
    def passed(self) -> bool:
        return all(self.conditions.values())


def _is_int(x: float, tol: float) -> bool:
    return abs(x - round(x)) <= tol


def _nearest_j(j, wigner: bool):
    # j - 1/2 in {0, 1/2, 1, ...}; on the Wigner manifold also sum(j - 1/2) integer
    jn = [max(0.5, round(2 * x) / 2) for x in j]
    if wigner and (sum(2 * x - 1 for x in jn) % 2):
        # move the entry with the largest rounding residual the other way
        res = [x - y for x, y in zip(j, jn)]
        k = max(range(3), key=lambda i: abs(res[i]))
        step = 0.5 if res[k] >= 0 or jn[k] == 0.5 else -0.5
        jn[k] += step
    return tuple(jn)


def _nearest_m(jn, m):
    out = []
    for jr, mr in zip(jn, m):
        # m in j - 1/2 + Z with |m| <= j - 1/2
        top = jr - 0.5
        k = round(mr - top)
        out.append(max(-top, min(top, top + k)))
    return tuple(out)


def quantize(j: Sequence[float], m: Sequence[float] | None = None, manifold: str = "jm",
             tol: float = 1e-9) -> QuantizeReport:
    """Evaluate the Bohr-Sommerfeld conditions on ``(j, m)``.

    jm-torus: ``4 pi j_r - 4 (pi/2) = 2 pi n_r`` and, when ``m`` is given,
    ``2 pi (j_r + m_r) - 2 (pi/2) = 2 pi n'_r`` with ``|m_r| <= j_r - 1/2``.
    Wigner manifold: the first family and ``2 pi sum j_r - 6 (pi/2) = 2 pi n``;
    with ``m`` given the jm conditions on ``m`` are added, so that the check
    describes a quantized intersection.
    """
    if manifold not in MANIFOLDS:
        raise BadSpec(f"unknown manifold {manifold!r}")
    j = tuple(float(x) for x in j)
    cond = {}
    for r, jr in enumerate(j, start=1):
        cond[f"first_{r}"] = _is_int((4 * math.pi * jr - 2 * math.pi) / (2 * math.pi), tol) and jr >= 0.5 - tol
    if manifold == "wigner":
        cond["c4"] = _is_int((2 * math.pi * sum(j) - 3 * math.pi) / (2 * math.pi), tol)
    mm = None
    if m is not None:
        mm = tuple(float(x) for x in m)
        for r, (jr, mr) in enumerate(zip(j, mm), start=1):
            cond[f"second_{r}"] = _is_int((2 * math.pi * (jr + mr) - math.pi) / (2 * math.pi), tol)
            cond[f"range_{r}"] = abs(mr) <= jr - 0.5 + tol
    jn = _nearest_j(j, manifold == "wigner")
    mn = _nearest_m(jn, mm) if mm is not None else None
    return QuantizeReport(manifold, cond, jn, mn)


# -- random base points -------------------------------------------------------


def random_jm_base(j, m, rng: np.random.Generator) -> np.ndarray:
    """A random point of the jm-torus: random phases on every component."""
    z = jm_reference(j, m)
    th = rng.uniform(0, 4 * math.pi, size=(3, 2))
    return z * np.exp(-0.5j * th)


def random_su2(rng: np.random.Generator) -> np.ndarray:
    """Haar-random SU(2) element."""
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    a, b = q[0] + 1j * q[1], q[2] + 1j * q[3]
    return np.array([[a, -np.conj(b)], [b, np.conj(a)]])


def random_wigner_base(j, rng: np.random.Generator) -> np.ndarray:
    """A random point of the Wigner manifold over the triangle ``j``."""
    z = wigner_reference(j)
    th = rng.uniform(0, 4 * math.pi, size=3)
    z = z * np.exp(-0.5j * th)[:, None]
    return apply_su2(random_su2(rng), z)
