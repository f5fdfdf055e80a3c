"""Schwinger oscillator model: spinors, SU(2) actions and action integrals.

A point of the large phase space of the 3j-model is three complex 2-spinors
``(z_r1, z_r2)``, held as a ``(3, 2)`` complex array (rows are spinors).  The
projection :func:`project` maps it to three angular momentum vectors.

Every flow used here is generated by a quadratic function
``A = 1/2 sum_r z_r^dagger G_r z_r`` with Hermitian 2x2 blocks ``G_r`` and is
solved in closed form, ``z_r(t) = exp(-i t G_r / 2) z_r(0)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.integrate import trapezoid

from .geometry import NotAllowed, Region, classify_region, orientation, triangle_shape

__all__ = [
    "SIGMA",
    "BadAxis",
    "RangeViolation",
    "UnknownFlow",
    "Flow",
    "project",
    "su2_axis_angle",
    "su2_to_so3",
    "apply_su2",
    "jm_reference",
    "wigner_reference",
    "intersection_spinors",
    "action_by_arg",
    "flow_generator",
    "evolve",
    "flow_action_integral",
]

SIGMA = np.array([
    [[0, 1], [1, 0]],
    [[0, -1j], [1j, 0]],
    [[1, 0], [0, -1]],
], dtype=complex)
_ID2 = np.eye(2, dtype=complex)


class BadAxis(ValueError):
    """Rotation axis is not a unit vector."""


class RangeViolation(ValueError):
    """``|m_r| > j_r``."""


class UnknownFlow(ValueError):
    """A path leg names a flow that is not supported."""


def project(cfg) -> tuple[np.ndarray, np.ndarray]:
    """Vectors ``J_r`` and values ``I_r`` of a spinor configuration.

    >>> J, I = project([[1, 1j]])
    >>> J.round(12).tolist(), I.tolist()
    [[0.0, 1.0, 0.0]], [1.0]
    """
    z = np.atleast_2d(np.asarray(cfg, dtype=complex))
    z1, z2 = z[:, 0], z[:, 1]
    w = np.conj(z1) * z2
    J = np.stack([w.real, w.imag, 0.5 * (abs(z1) ** 2 - abs(z2) ** 2)], axis=1)
    I = 0.5 * (abs(z1) ** 2 + abs(z2) ** 2)
    return J, I


def su2_axis_angle(n: Sequence[float], theta: float) -> np.ndarray:
    """``u(n, theta) = cos(theta/2) - i n.sigma sin(theta/2)``."""
    n = np.asarray(n, dtype=float)
    if n.shape != (3,) or abs(np.linalg.norm(n) - 1) > 1e-10:
        raise BadAxis(f"axis must be a unit 3-vector, got {n}")
    ns = np.tensordot(n, SIGMA, axes=1)
    return math.cos(theta / 2) * _ID2 - 1j * math.sin(theta / 2) * ns


def su2_to_so3(u) -> np.ndarray:
    """``R_ij = 1/2 tr(u^dagger sigma_i u sigma_j)``; two-to-one onto SO(3)."""
    u = np.asarray(u, dtype=complex)
    ud = u.conj().T
    R = np.empty((3, 3))
    for i in range(3):
        a = ud @ SIGMA[i] @ u
        for k in range(3):
            R[i, k] = 0.5 * np.trace(a @ SIGMA[k]).real
    return R


def apply_su2(u, cfg) -> np.ndarray:
    """Multiply every spinor by the same 2x2 matrix."""
    return np.asarray(cfg, dtype=complex) @ np.asarray(u, dtype=complex).T


def jm_reference(j, m, atol: float = 1e-12) -> np.ndarray:
    """The jm-torus point where every ``z_r mu`` is real and nonnegative."""
    j = np.asarray(j, dtype=float)
    m = np.asarray(m, dtype=float)
    if np.any(np.abs(m) > j + atol):
        raise RangeViolation(f"|m| > j for j = {j}, m = {m}")
    return np.stack([np.sqrt(np.clip(j + m, 0, None)),
                     np.sqrt(np.clip(j - m, 0, None))], axis=1).astype(complex)


def wigner_reference(j) -> np.ndarray:
    """Spinors over the reference triangle with every ``z_r1`` real positive."""
    j1, j2, j3 = (float(x) for x in j)
    s = triangle_shape((j1, j2, j3))
    return np.array([
        math.sqrt(2 * j1) * np.array([math.cos(s.eta2 / 2), math.sin(s.eta2 / 2)]),
        math.sqrt(2 * j2) * np.array([math.cos(s.eta1 / 2), -math.sin(s.eta1 / 2)]),
        math.sqrt(2 * j3) * np.array([1.0, 0.0]),
    ], dtype=complex)


def intersection_spinors(j, m, branch: str = "principal") -> np.ndarray:
    """A common point of the jm-torus and the Wigner manifold.

    The reference Wigner spinors rotated by ``u(y, beta) u(z, gamma)``.
    """
    if classify_region(j, m) is not Region.ALLOWED:
        raise NotAllowed(f"j = {j}, m = {m} is not classically allowed")
    o = orientation(j, m, branch)
    u = su2_axis_angle((0, 1, 0), o.beta) @ su2_axis_angle((0, 0, 1), o.gamma)
    return apply_su2(u, wigner_reference(j))


def _arg(w) -> np.ndarray:
    # arg on [-pi, pi)
    a = np.angle(w)
    return np.where(a >= math.pi, a - 2 * math.pi, a)


def action_by_arg(j, m, branch: str = "principal") -> float:
    """jm-torus action to the intersection point, from the spinor phases.

    ``S = sum_r j_r arg(conj(z_r1) conj(z_r2)) + m_r arg(conj(z_r1) z_r2)``
    with ``arg`` taking values in ``[-pi, pi)``.
    """
    z = intersection_spinors(j, m, branch)
    z1, z2 = z[:, 0], z[:, 1]
    jj = np.asarray(j, dtype=float)
    mm = np.asarray(m, dtype=float)
    return float(jj @ _arg(np.conj(z1) * np.conj(z2)) + mm @ _arg(np.conj(z1) * z2))


# -- flows and action integrals ---------------------------------------------


@dataclass(frozen=True)
class Flow:
    """One leg of a path: follow the flow of ``kind`` for ``angle``.

    ``kind`` is one of

    * ``"I_rmu"``: ``I_{r mu} = |z_{r mu}|^2 / 2`` (needs ``r`` and ``mu``),
    * ``"I_r"``: ``I_r`` (needs ``r``),
    * ``"J_rz"``: ``J_{rz}`` (needs ``r``),
    * ``"n.J_r"``: ``n . J_r`` (needs ``r`` and ``axis``),
    * ``"n.J"``: ``n . J``, rotating all spinors (needs ``axis``).

    Indices ``r`` and ``mu`` count from 1.
    """

    kind: str
    angle: float
    r: int | None = None
    mu: int | None = None
    axis: tuple[float, float, float] | None = None


def flow_generator(flow: Flow, n_spinors: int = 3) -> np.ndarray:
    """Hermitian blocks ``G_r``, shape ``(n_spinors, 2, 2)``."""
    G = np.zeros((n_spinors, 2, 2), dtype=complex)
    kind = flow.kind
    if kind == "n.J":
        n = _unit(flow.axis)
        G[:] = np.tensordot(n, SIGMA, axes=1)
        return G
    if flow.r is None or not 1 <= flow.r <= n_spinors:
        raise UnknownFlow(f"flow {kind!r} needs a spinor index r in 1..{n_spinors}")
    r = flow.r - 1
    if kind == "I_rmu":
        if flow.mu not in (1, 2):
            raise UnknownFlow("I_rmu needs mu in (1, 2)")
        G[r, flow.mu - 1, flow.mu - 1] = 1.0
    elif kind == "I_r":
        G[r] = _ID2
    elif kind == "J_rz":
        G[r] = SIGMA[2]
    elif kind == "n.J_r":
        G[r] = np.tensordot(_unit(flow.axis), SIGMA, axes=1)
    else:
        raise UnknownFlow(f"unknown flow {kind!r}")
    return G


def _unit(axis):
    if axis is None:
        raise UnknownFlow("rotation flow needs an axis")
    n = np.asarray(axis, dtype=float)
    if n.shape != (3,) or abs(np.linalg.norm(n) - 1) > 1e-10:
        raise BadAxis(f"axis must be a unit 3-vector, got {n}")
    return n


def evolve(cfg, G: np.ndarray, t) -> np.ndarray:
    """``z_r(t) = exp(-i t G_r / 2) z_r`` for scalar or 1-d array ``t``.

    Returns shape ``cfg.shape`` for scalar ``t``, else ``(len(t),) + cfg.shape``.
    """
    cfg = np.asarray(cfg, dtype=complex)
    lam, V = np.linalg.eigh(G)                       # (N, 2), (N, 2, 2)
    coeff = np.einsum("rba,rb->ra", V.conj(), cfg)   # V^dagger z
    tt = np.atleast_1d(np.asarray(t, dtype=float))
    phase = np.exp(-0.5j * tt[:, None, None] * lam[None])
    out = np.einsum("rab,trb->tra", V, phase * coeff[None])
    return out[0] if np.ndim(t) == 0 else out


def flow_action_integral(start, path: Sequence[Flow], steps: int = 10_000) -> float:
    """``Im integral sum z dz-bar`` along a concatenation of flows.

    Each leg is sampled at ``steps + 1`` points of the closed-form solution
    and the integrand ``Im sum z dz-bar/dt`` is integrated by the trapezoid
    rule.
    """
    z = np.asarray(start, dtype=complex)
    total = 0.0
    for leg in path:
        G = flow_generator(leg, z.shape[0])
        t = np.linspace(0.0, leg.angle, steps + 1)
        zt = evolve(z, G, t)
        dz = -0.5j * np.einsum("rab,trb->tra", G, zt)
        integrand = np.sum(zt * np.conj(dz), axis=(1, 2)).imag
        total += float(trapezoid(integrand, t))
        z = zt[-1]
    return total
