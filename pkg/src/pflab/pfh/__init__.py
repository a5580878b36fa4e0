"""Past-future harmonic function lab: residual verification of the defining
PDE pair, the stability transforms, Hermite coefficient machinery and the
pairing-based martingale tests."""

from .candidates import PFCandidate, lnu_candidate, harness_candidate, exp_cross_candidate
from .residual import ResidualReport, residual_minus, residual_plus, residual_report
from .transforms import (
    transform_time_inversion,
    transform_drift_shift,
    transform_scale,
    transform_reflect,
    from_spacetime_harmonic,
)
from .hermite import hermite_h, hermite_5var, pf_hermite_coeff
from .pairing import (
    pairing_martingale_test,
    conditional_martingale_test,
    k_decomposition_check,
    pf_projection_exponential,
    gaussian_pairing_closed_form,
)

__all__ = [
    "PFCandidate",
    "lnu_candidate",
    "harness_candidate",
    "exp_cross_candidate",
    "ResidualReport",
    "residual_minus",
    "residual_plus",
    "residual_report",
    "transform_time_inversion",
    "transform_drift_shift",
    "transform_scale",
    "transform_reflect",
    "from_spacetime_harmonic",
    "hermite_h",
    "hermite_5var",
    "pf_hermite_coeff",
    "pairing_martingale_test",
    "conditional_martingale_test",
    "k_decomposition_check",
    "pf_projection_exponential",
    "gaussian_pairing_closed_form",
]
