"""Schwinger spinors for the intersection points and the phase they carry."""
import math

import numpy as np

from semi3j import action_phase
from semi3j.geometry import rotated_config
from semi3j.schwinger import Flow, action_by_arg, flow_action_integral, intersection_spinors, project
from semi3j.semiclassical import action_phase_arccos

j, m = (10.5, 11.5, 12.5), (3.0, -5.0, 2.0)
z = intersection_spinors(j, m)
J, I = project(z)
print("spinor moduli give I_i  :", I)
print("projected vectors match :", np.abs(J - rotated_config(j, m)).max())

# three routes to the same phase
print("angle form   S =", action_phase(j, m))
print("arg form     S =", action_by_arg(j, m))
print("arccos form  S =", action_phase_arccos(j, m))

# a rigid rotation of all three vectors carries no action
leg = Flow("n.J", 2 * math.pi, axis=(0.6, 0.0, 0.8))
print("action along a full rotation:", flow_action_integral(z, [leg]))

# scaling j and m scales the phase
for lam in (1, 2, 4):
    print(f"lambda = {lam}: S / lambda = {action_phase(np.multiply(j, lam), np.multiply(m, lam)) / lam:.12f}")
