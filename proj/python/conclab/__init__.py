"""Numerical laboratory for concentration of measure on S^n, RP^n and CP^n.

Thin re-export of the compiled core. Points are unit representatives given as
complex row vectors (imaginary parts are zero on the real families); models
are named by designators such as ``sphere:4``, ``rp:3`` or ``cp:2``.
"""

from ._core import (
    CheckFailure,
    MaxDrawsExceeded,
    NoAdmissibleDimension,
    UsageError,
    __version__,
    ball_mass_floor,
    basis_point,
    build_net,
    cardinality_bound_closed,
    cardinality_bound_integral,
    cardinality_chain_check,
    dimension_bound,
    dimension_formula,
    disintegration_check,
    distance,
    embed_point,
    empirical_lipschitz,
    estimate_median,
    evaluate_function,
    find_submanifold,
    haar_isometry,
    list_functions,
    model_info,
    ricci_floor_scan,
    sample_points,
    sectional_samples,
    success_floor,
    tail_check,
    verify_covering,
)

__all__ = [
    "CheckFailure",
    "MaxDrawsExceeded",
    "NoAdmissibleDimension",
    "UsageError",
    "__version__",
    "ball_mass_floor",
    "basis_point",
    "build_net",
    "cardinality_bound_closed",
    "cardinality_bound_integral",
    "cardinality_chain_check",
    "dimension_bound",
    "dimension_formula",
    "disintegration_check",
    "distance",
    "embed_point",
    "empirical_lipschitz",
    "estimate_median",
    "evaluate_function",
    "find_submanifold",
    "haar_isometry",
    "list_functions",
    "model_info",
    "ricci_floor_scan",
    "sample_points",
    "sectional_samples",
    "success_floor",
    "tail_check",
    "verify_covering",
]
