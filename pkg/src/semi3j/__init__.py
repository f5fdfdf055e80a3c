"""Exact and semiclassical Wigner 3j-symbols.

The exact symbols come from the Racah single sum in integer arithmetic
(:mod:`semi3j.exact`).  The semiclassical side follows the Schwinger
oscillator picture: vector geometry (:mod:`semi3j.geometry`), spinors and
action integrals (:mod:`semi3j.schwinger`), Bohr-Sommerfeld data
(:mod:`semi3j.quantization`) and the Ponzano-Regge formula
(:mod:`semi3j.semiclassical`).
"""
from .exact import (
    EmptyRow,
    ExactSurd,
    HalfInt,
    ThreeJArgs,
    exact_threej,
    orthogonality_residual,
    selection_check,
    threej_float,
    threej_m_row,
)
from .geometry import (
    CAUSTIC_BAND,
    Region,
    classify_region,
    orientation,
    projected_area,
    rotated_config,
    triangle_shape,
)
from .semiclassical import (
    CALIBRATED_RULE,
    DEFAULT_RULE,
    SignRule,
    action_angles,
    action_phase,
    asymptotic_threej,
    calibrate_prefactor,
)

__version__ = "0.1.0"
