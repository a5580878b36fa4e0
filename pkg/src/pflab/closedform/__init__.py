"""Closed-form evaluators for every formula the lab verifies by Monte Carlo."""

from .bridge import (
    DriftLevel,
    ClampedProbability,
    bridge_hit_prob,
    bridge_hit_time_density,
    sloped_sup_prob,
    sigma_pf,
    h_pfh_lnu,
    h_pfh_harness,
    e_st,
)
from .lastzero import (
    SubProbabilityLaw,
    g0_law,
    phi_psi,
    g_nu_law,
    conditional_given_g,
)
from .gbm import (
    bs_call_gbm,
    bs_put_gbm,
    last_passage_cdf_G,
    expected_local_time_gbm,
    laplace_gK_killed_bm,
    laplace_gK_inv_bes3,
    cameron_martin_atom,
    first_passage_prob_drift,
)
from .rcurve import rho_curve, r_of_t, r_series, r_laplace, rtilde_laplace, r_integral_form
from .asianform import asian_a1, asian_a2, asian_laplace_atilde, c_quadratic

__all__ = [
    "DriftLevel",
    "ClampedProbability",
    "bridge_hit_prob",
    "bridge_hit_time_density",
    "sloped_sup_prob",
    "sigma_pf",
    "h_pfh_lnu",
    "h_pfh_harness",
    "e_st",
    "SubProbabilityLaw",
    "g0_law",
    "phi_psi",
    "g_nu_law",
    "conditional_given_g",
    "bs_call_gbm",
    "bs_put_gbm",
    "last_passage_cdf_G",
    "expected_local_time_gbm",
    "laplace_gK_killed_bm",
    "laplace_gK_inv_bes3",
    "cameron_martin_atom",
    "first_passage_prob_drift",
    "rho_curve",
    "r_of_t",
    "r_series",
    "r_laplace",
    "rtilde_laplace",
    "r_integral_form",
    "asian_a1",
    "asian_a2",
    "asian_laplace_atilde",
    "c_quadratic",
]
