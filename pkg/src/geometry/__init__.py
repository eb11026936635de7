"""Root geometry: the root set Gamma, fibers and the Lojasiewicz exponent."""

from src.geometry.lojafit import (
    AssumptionReport,
    SigmaEstimate,
    check_assumptions,
    decompose_branches,
    estimate_sigma,
    inverse_growth_fit,
    separation_exponent,
)
from src.geometry.rootgeom import (
    Domain,
    GammaCloud,
    calibrate_domain,
    dist_to_gamma,
    fiber,
    inv_p_derivative,
    is_hyperbolic,
    sample_gamma,
)

__all__ = [
    "AssumptionReport",
    "SigmaEstimate",
    "check_assumptions",
    "decompose_branches",
    "estimate_sigma",
    "inverse_growth_fit",
    "separation_exponent",
    "Domain",
    "GammaCloud",
    "calibrate_domain",
    "dist_to_gamma",
    "fiber",
    "inv_p_derivative",
    "is_hyperbolic",
    "sample_gamma",
]
