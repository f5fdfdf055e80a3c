"""Maslov indices and actions of basis contours on the two Lagrangian manifolds."""
import numpy as np

from semi3j.quantization import (
    ContourSpec,
    basis_contour_data,
    homotopy_consistency,
    maslov_winding,
    quantize,
    random_jm_base,
    random_wigner_base,
)

rng = np.random.default_rng(5)
j, m = np.array([2.5, 3.0, 3.5]), np.array([0.5, -1.0, 0.5])

base = random_jm_base(j, m, rng)
for kind in ("first", "second"):
    for r in (1, 2, 3):
        spec = ContourSpec("jm", kind, base, r=r)
        d = basis_contour_data(spec)
        print(f"jm {kind:6s} r={r}: action {d.action:8.4f}, winding {maslov_winding(spec)} (expected {d.maslov})")

w = random_wigner_base(j, rng)
spec = ContourSpec("wigner", "c4", w, axis=(0.0, 0.6, 0.8))
print("wigner C4: winding", maslov_winding(spec), "expected", basis_contour_data(spec).maslov)

h = homotopy_consistency(w)
print(f"2 C4 ~ C1 + C2 + C3: actions {2 * h.action_c4:.6f} vs {h.action_sum:.6f}, "
      f"Maslov {2 * h.maslov_c4} vs {h.maslov_sum}, {'ok' if h.passed else 'mismatch'}")

# Bohr-Sommerfeld conditions for a candidate set of contour values
for jj in ((1.5, 1.5, 2.5), (1.0, 1.0, 1.0)):
    r = quantize(jj, None, "wigner")
    print(jj, "quantized" if r.passed else f"fails, nearest {r.nearest_j}")
