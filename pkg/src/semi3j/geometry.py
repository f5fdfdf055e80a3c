"""Vector geometry in angular momentum space.

Three classical angular momenta of lengths ``j = (j1, j2, j3)`` that sum to
zero form a triangle.  This module computes its shape, the reference and
rotated orientations that reproduce prescribed projections ``m`` on the
z-axis, the classical region, the projected area, and Lie-Poisson brackets.

Configurations of vectors are ``(N, 3)`` float arrays, one row per vector.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "TriangleViolation",
    "MSumViolation",
    "DegenerateBeta",
    "NotAllowed",
    "TriangleShape",
    "Orientation",
    "Region",
    "CAUSTIC_BAND",
    "triangle_shape",
    "reference_config",
    "orientation",
    "cos_gamma_alt",
    "classify_region",
    "rotated_config",
    "projected_area",
    "lie_poisson",
    "tetra_bracket",
]

CAUSTIC_BAND = 1e-9


class TriangleViolation(ValueError):
    """The lengths do not satisfy the strict triangle inequality."""


class MSumViolation(ValueError):
    """The projections do not sum to zero."""


class DegenerateBeta(ValueError):
    """``m3 = +-j3``: the orientation construction divides by ``sin(beta)``."""


class NotAllowed(ValueError):
    """The requested point is not in the classically allowed region."""


class Region(enum.Enum):
    ALLOWED = "allowed"
    FORBIDDEN = "forbidden"
    CAUSTIC = "caustic"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class TriangleShape:
    """Interior angles ``eta`` (``eta_r`` is opposite ``J_r``) and area."""

    eta1: float
    eta2: float
    eta3: float
    area: float

    @property
    def eta(self) -> tuple[float, float, float]:
        return (self.eta1, self.eta2, self.eta3)


@dataclass(frozen=True)
class Orientation:
    """Euler angles taking the reference triangle to the prescribed ``m``.

    ``gamma`` is ``nan`` when ``|cos_gamma| > 1`` (no real orientation).
    """

    beta: float
    cos_gamma: float
    gamma: float
    branch: str


def _triple(x) -> tuple[float, float, float]:
    a, b, c = (float(v) for v in x)
    return a, b, c


def triangle_shape(j: Sequence[float]) -> TriangleShape:
    """Angles and area of the triangle with sides ``j``.

    >>> s = triangle_shape((3, 4, 5))
    >>> round(s.area, 12), round(s.eta3 / math.pi, 12)
    (6.0, 0.5)
    """
    j1, j2, j3 = _triple(j)
    if min(j1, j2, j3) <= 0:
        raise TriangleViolation(f"lengths must be positive, got {j}")
    prod = (j1 + j2 + j3) * (-j1 + j2 + j3) * (j1 - j2 + j3) * (j1 + j2 - j3)
    if prod <= 0:
        raise TriangleViolation(f"{j} violates the strict triangle inequality")
    area = 0.25 * math.sqrt(prod)
    # atan2 of (sin, cos) stays accurate for angles near 0 or pi
    eta = [
        math.atan2(2 * area / (b * c), (a * a - b * b - c * c) / (2 * b * c))
        for a, b, c in ((j1, j2, j3), (j2, j3, j1), (j3, j1, j2))
    ]
    return TriangleShape(eta[0], eta[1], eta[2], area)


def reference_config(j: Sequence[float]) -> np.ndarray:
    """The triangle with ``J3`` on the z-axis and ``J1``, ``J2`` in the x-z plane."""
    j1, j2, j3 = _triple(j)
    s = triangle_shape(j)
    return np.array([
        [j1 * math.sin(s.eta2), 0.0, j1 * math.cos(s.eta2)],
        [-j2 * math.sin(s.eta1), 0.0, j2 * math.cos(s.eta1)],
        [0.0, 0.0, j3],
    ])


def _check_m(j, m, tol=1e-9):
    j1, j2, j3 = _triple(j)
    m1, m2, m3 = _triple(m)
    if abs(m1 + m2 + m3) > tol * max(1.0, j1 + j2 + j3):
        raise MSumViolation(f"m = {m} does not sum to zero")
    for r, (jr, mr) in enumerate(((j1, m1), (j2, m2), (j3, m3)), start=1):
        if abs(mr) > jr:
            raise ValueError(f"|m{r}| > j{r} for j = {j}, m = {m}")
    return (j1, j2, j3), (m1, m2, m3)


def orientation(j, m, branch: str = "principal") -> Orientation:
    """Rotation angles ``(beta, gamma)`` about y then about ``J3``.

    ``beta`` fixes ``J3z = m3``; ``gamma`` then fixes ``J1z = m1`` (and, with
    ``sum(m) = 0``, ``J2z = m2``).  The secondary branch negates ``gamma``.
    """
    if branch not in ("principal", "secondary"):
        raise ValueError(f"unknown branch {branch!r}")
    (j1, j2, j3), (m1, m2, m3) = _check_m(j, m)
    s = triangle_shape((j1, j2, j3))
    cb = max(-1.0, min(1.0, m3 / j3))
    beta = math.acos(cb)
    sb = math.sin(beta)
    if sb < 1e-12:
        raise DegenerateBeta(f"m3 = {m3} sits at +-j3 = {j3}")
    cos_gamma = (j1 * cb * math.cos(s.eta2) - m1) / (j1 * sb * math.sin(s.eta2))
    if abs(cos_gamma) <= 1.0:
        gamma = math.acos(cos_gamma)
    else:
        gamma = math.nan
    if branch == "secondary":
        gamma = -gamma
    return Orientation(beta, cos_gamma, gamma, branch)


def cos_gamma_alt(j, m) -> float:
    """``cos(gamma)`` from the ``J2z = m2`` condition instead of ``J1z = m1``."""
    (j1, j2, j3), (m1, m2, m3) = _check_m(j, m)
    s = triangle_shape((j1, j2, j3))
    cb = m3 / j3
    sb = math.sqrt(max(0.0, 1 - cb * cb))
    return (m2 - j2 * cb * math.cos(s.eta1)) / (j2 * sb * math.sin(s.eta1))


def classify_region(j, m, band: float = CAUSTIC_BAND) -> Region:
    """Allowed, forbidden or caustic, by ``|cos(gamma)|`` against ``1 +- band``.

    ``m3 = +-j3`` is classed as caustic without computing ``gamma``.
    """
    try:
        o = orientation(j, m)
    except DegenerateBeta:
        return Region.CAUSTIC
    c = abs(o.cos_gamma)
    if c < 1 - band:
        return Region.ALLOWED
    if c > 1 + band:
        return Region.FORBIDDEN
    return Region.CAUSTIC


def rotated_config(j, m, branch: str = "principal", band: float = CAUSTIC_BAND) -> np.ndarray:
    """The reference triangle rotated so that ``J_rz = m_r``."""
    if classify_region(j, m, band) is not Region.ALLOWED:
        raise NotAllowed(f"j = {j}, m = {m} is not classically allowed")
    j1, j2, j3 = _triple(j)
    s = triangle_shape(j)
    o = orientation(j, m, branch)
    cb, sb = math.cos(o.beta), math.sin(o.beta)
    cg, sg = math.cos(o.gamma), math.sin(o.gamma)
    c1, s1 = math.cos(s.eta1), math.sin(s.eta1)
    c2, s2 = math.cos(s.eta2), math.sin(s.eta2)
    return np.array([
        j1 * np.array([cb * cg * s2 + sb * c2, sg * s2, -sb * cg * s2 + cb * c2]),
        j2 * np.array([-cb * cg * s1 + sb * c1, -sg * s1, sb * cg * s1 + cb * c1]),
        j3 * np.array([sb, 0.0, cb]),
    ])


def projected_area(cfg) -> float:
    """Area of the triangle spanned by ``J1``, ``J2`` projected on the x-y plane."""
    cfg = np.asarray(cfg, dtype=float)
    J1, J2 = cfg[0], cfg[1]
    return 0.5 * abs(J1[0] * J2[1] - J1[1] * J2[0])


def _fd_gradient(f, point, h):
    g = np.zeros_like(point)
    it = np.nditer(point, flags=["multi_index"])
    for _ in it:
        idx = it.multi_index
        up = point.copy()
        dn = point.copy()
        up[idx] += h
        dn[idx] -= h
        g[idx] = (f(up) - f(dn)) / (2 * h)
    return g


def lie_poisson(
    f: Callable[[np.ndarray], float],
    g: Callable[[np.ndarray], float],
    point,
    grad_f: Callable[[np.ndarray], np.ndarray] | None = None,
    grad_g: Callable[[np.ndarray], np.ndarray] | None = None,
) -> float:
    """Lie-Poisson bracket ``sum_r J_r . (df/dJ_r x dg/dJ_r)`` at ``point``.

    ``f`` and ``g`` take an ``(N, 3)`` array.  Missing gradients are taken by
    central differences with step ``1e-6 * max(1, |point|)``.
    """
    point = np.array(point, dtype=float)
    if point.ndim == 1:
        point = point.reshape(1, 3)
    h = 1e-6 * max(1.0, float(np.max(np.abs(point))))
    df = grad_f(point) if grad_f is not None else _fd_gradient(f, point, h)
    dg = grad_g(point) if grad_g is not None else _fd_gradient(g, point, h)
    df = np.asarray(df, dtype=float).reshape(point.shape)
    dg = np.asarray(dg, dtype=float).reshape(point.shape)
    return float(np.sum(point * np.cross(df, dg)))


def tetra_bracket(cfg) -> float:
    """``{J23^2, J12^2} = 4 J1 . (J2 x J3)`` for a tetrahedron of vectors.

    Only the first three rows are used; a fourth closes the tetrahedron.
    """
    cfg = np.asarray(cfg, dtype=float)
    return 4.0 * float(np.dot(cfg[0], np.cross(cfg[1], cfg[2])))
