"""Fit the overall sign of the asymptotic formula against exact symbols."""
import numpy as np

from semi3j import CALIBRATED_RULE, DEFAULT_RULE, asymptotic_threej, calibrate_prefactor, exact_threej
from semi3j.semiclassical import sample_calibration_grid

grid = sample_calibration_grid(400, seed=0)
target = np.array([exact_threej(a).sign for a in grid])

got = np.sign([asymptotic_threej(a, DEFAULT_RULE).value for a in grid])
print(f"{DEFAULT_RULE}: agrees on {np.mean(got == target):.1%} of integer-j points")

cal = calibrate_prefactor(grid)
print(f"best rule on integer j: {cal.rule}, agreement {cal.agreement:.3f}, "
      f"{cal.equivalent} equivalent rules")

# half-integer points separate the rules that coincide on integer j
mixed = grid + sample_calibration_grid(200, seed=1, integer_j=False)
cal = calibrate_prefactor(mixed)
print(f"best rule with half-integers: {cal.rule}, agreement {cal.agreement:.3f}")
print("library default:", CALIBRATED_RULE)
