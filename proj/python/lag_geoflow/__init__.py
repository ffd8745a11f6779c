"""Geodesics of positive Lagrangian circles in A_m Milnor fibers.

Fibers are {z^n + f(zeta) = 0}; circles are sampled at N + 1 markers on [0, pi]
and extended by the involution. Failures raise GeoflowError with `kind`,
`detail` and `is_domain_error` attributes.
"""

from ._core import (
    Arc,
    GeodesicPath,
    GeoflowError,
    InvariantFunction,
    MilnorFiber,
    SymmetricCircle,
    ToleranceProfile,
    bvp_solve,
    check_horizontal_family,
    check_positive,
    cycle_from_arc,
    cycle_from_json,
    distance,
    exp_isometry_check,
    hausdorff_zeta,
    inner,
    integrate,
    is_special,
    ivp_solve,
    project_mean_zero,
    trace_leaf,
    triangle_identity,
    upsilon_norm,
    verify_geodesic,
)

__all__ = [
    "Arc",
    "GeodesicPath",
    "GeoflowError",
    "InvariantFunction",
    "MilnorFiber",
    "SymmetricCircle",
    "ToleranceProfile",
    "bvp_solve",
    "check_horizontal_family",
    "check_positive",
    "cycle_from_arc",
    "cycle_from_json",
    "distance",
    "exp_isometry_check",
    "hausdorff_zeta",
    "inner",
    "integrate",
    "is_special",
    "ivp_solve",
    "project_mean_zero",
    "trace_leaf",
    "triangle_identity",
    "upsilon_norm",
    "verify_geodesic",
]
