"""Accuracy studies of the asymptotic formula against the exact symbols."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.ndimage import binary_erosion

from .exact import HalfInt, ThreeJArgs, exact_threej, selection_check
from .geometry import CAUSTIC_BAND, Region
from .semiclassical import asymptotic_threej

__all__ = ["ScanRow", "scan_m1", "scan_rows", "grid_error_ratio", "ScalingPoint",
           "interior_cells", "scaling_study", "loglog_slope"]


@dataclass(frozen=True)
class ScanRow:
    m1: Fraction
    m2: Fraction
    m3: Fraction
    exact: float
    asymptotic: float | None
    region: Region | None
    S: float | None
    delta_z: float | None

    @property
    def abs_err(self) -> float | None:
        if self.asymptotic is None:
            return None
        return abs(self.asymptotic - self.exact)


def _m_values(twice: int):
    return range(-twice, twice + 1, 2)


def scan_m1(j: Sequence, m1, band: float = CAUSTIC_BAND) -> list[ScanRow]:
    """Every admissible ``(m1, m2, m3)`` of the row with fixed ``m1``, by ``m2``."""
    j1, j2, j3 = (HalfInt.of(x) for x in j)
    u1 = HalfInt.of(m1).twice
    rows = []
    for u2 in _m_values(j2.twice):
        u3 = -u1 - u2
        if abs(u3) > j3.twice:
            continue
        args = ThreeJArgs(j1, j2, j3, HalfInt(u1), HalfInt(u2), HalfInt(u3))
        if selection_check(args):
            continue
        res = asymptotic_threej(args, band=band)
        rows.append(ScanRow(Fraction(u1, 2), Fraction(u2, 2), Fraction(u3, 2),
                            float(exact_threej(args)), res.value, res.region,
                            res.S, res.delta_z))
    return rows


def scan_rows(j: Sequence, band: float = CAUSTIC_BAND) -> list[ScanRow]:
    """The full ``sum(m) = 0`` grid, sorted by ``(m1, m2)``."""
    j1 = HalfInt.of(j[0])
    out = []
    for u1 in _m_values(j1.twice):
        out.extend(scan_m1(j, HalfInt(u1), band))
    return out


def grid_error_ratio(j: Sequence, margin: int = 3, band: float = CAUSTIC_BAND) -> tuple[float, int]:
    """``RMS(asym - exact) / RMS(exact)`` over the allowed grid cells that are at
    least ``margin`` cells (in ``m1`` and ``m2``) from any non-allowed cell.

    Returns the ratio and the number of cells used.
    """
    rows = scan_rows(j, band)
    tw1, tw2 = HalfInt.of(j[0]).twice, HalfInt.of(j[1]).twice
    shape = (tw1 + 1, tw2 + 1)
    allowed = np.zeros(shape, dtype=bool)
    ex = np.zeros(shape)
    asy = np.zeros(shape)
    for row in rows:
        a = int((2 * row.m1 + tw1) // 2)
        b = int((2 * row.m2 + tw2) // 2)
        if row.region is Region.ALLOWED:
            allowed[a, b] = True
            ex[a, b] = row.exact
            asy[a, b] = row.asymptotic
    size = 2 * margin + 1
    mask = binary_erosion(allowed, structure=np.ones((size, size), dtype=bool), border_value=0)
    d = asy[mask] - ex[mask]
    return float(np.sqrt(np.mean(d ** 2)) / np.sqrt(np.mean(ex[mask] ** 2))), int(mask.sum())


@dataclass(frozen=True)
class ScalingPoint:
    lam: Fraction
    max_abs_err: float
    rms_err: float
    cells: int


def _scale(x: HalfInt, lam: Fraction) -> int:
    v = x.value * lam
    if v.denominator != 1:
        raise ValueError(f"lambda = {lam} takes {x} to the non-integer {v}")
    return int(v)


def interior_cells(rows: Sequence[ScanRow], margin: int) -> list[ScanRow]:
    """Allowed cells of a row with ``margin`` allowed neighbours on each side."""
    ok = [r.region is Region.ALLOWED for r in rows]
    out = []
    for i, r in enumerate(rows):
        lo, hi = i - margin, i + margin
        if lo >= 0 and hi < len(rows) and all(ok[lo:hi + 1]):
            out.append(r)
    return out


def scaling_study(j: Sequence, m: Sequence, lambdas: Sequence = (1, 2, 4, 8),
                  margin: int = 3, band: float = CAUSTIC_BAND) -> list[ScalingPoint]:
    """Errors at ``(lam j, lam m)`` for the interior cells ``m`` of a base row.

    The base row is ``(j; m1, m2, -m1 - m2)`` with ``m1`` from ``m``.  Its
    interior is the set of allowed cells with ``margin`` allowed neighbours on
    each side; every interior cell is followed to ``lam`` times its quantum
    numbers, so each ``lam`` samples the same classical points.
    """
    base_j = [HalfInt.of(x) for x in j]
    base = interior_cells(scan_m1(base_j, HalfInt.of(m[0]), band), margin)
    if not base:
        raise ValueError(f"the row ({j}; {m[0]}, ...) has no interior cells")
    out = []
    for lam in lambdas:
        lam = Fraction(lam)
        js = [_scale(x, lam) for x in base_j]
        errs = []
        for cell in base:
            ms = [_scale(HalfInt.of(x), lam) for x in (cell.m1, cell.m2, cell.m3)]
            args = ThreeJArgs.of(js, ms)
            res = asymptotic_threej(args, band=band)
            if res.value is None:
                raise ValueError(f"{args} is not allowed at lambda = {lam}")
            errs.append(abs(res.value - float(exact_threej(args))))
        errs = np.array(errs)
        out.append(ScalingPoint(lam, float(errs.max()), float(np.sqrt(np.mean(errs ** 2))), errs.size))
    return out


def loglog_slope(points: Sequence[ScalingPoint]) -> float:
    """Least-squares slope of ``log(max_abs_err)`` against ``log(lam)``."""
    x = np.log([float(p.lam) for p in points])
    y = np.log([p.max_abs_err for p in points])
    return float(np.polyfit(x, y, 1)[0])
