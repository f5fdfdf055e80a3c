"""The triangle of angular momentum vectors and its orientation for given m."""
import numpy as np

from semi3j import Region, classify_region, orientation, projected_area, rotated_config, triangle_shape

j = (3.0, 4.0, 5.0)
s = triangle_shape(j)
print("3-4-5 triangle: area", s.area, "exterior angles", np.round([s.eta1, s.eta2, s.eta3], 6))

# the rotated configuration has J_i . z = m_i and closes to zero
m = (1.0, -2.0, 1.0)
cfg = rotated_config(j, m)
print("J_z components:", cfg[:, 2], " sum of vectors:", cfg.sum(axis=0).round(14))
print("Euler angles:", orientation(j, m))
print("area projected on the xy-plane:", projected_area(cfg))

# sweep m1 across a row and watch the region change
j = (10.5, 11.5, 12.5)
for m1 in np.arange(-10.5, 11, 3.0):
    m2 = -m1 / 2
    print(f"m = ({m1:5.1f}, {m2:5.2f}, {-m1 - m2:5.2f}): {classify_region(j, (m1, m2, -m1 - m2)).value}")

# stretched vectors sit on the caustic, beyond it the row is forbidden
assert classify_region((8, 8, 8), (-8, 0, 8)) is Region.CAUSTIC
assert classify_region((8, 8, 8), (-8, 8, 0)) is Region.FORBIDDEN
