"""Monte Carlo oracles for last-passage laws and the finite-horizon
conditional-survival formulas."""

from ..report import CheckReport
from .crossing import (
    cell_cross_prob,
    cell_line_cross_prob,
    sample_cell_max,
    sample_cell_min,
    bes3_cell_dip_prob,
)
from .lastpassage import (
    LastPassageSample,
    sample_g_finite_horizon,
    sample_g_ensemble,
    azema_conditional_check,
    sample_last_passage_drift,
    g_decomposition_check,
    note2_gk_law_check,
    conditional_given_g_check,
)
from .identities import (
    reflection_identity_check,
    doob_sup_check,
    put_identity_check,
    prop9_1_checks,
)

__all__ = [
    "CheckReport",
    "cell_cross_prob",
    "cell_line_cross_prob",
    "sample_cell_max",
    "sample_cell_min",
    "bes3_cell_dip_prob",
    "LastPassageSample",
    "sample_g_finite_horizon",
    "sample_g_ensemble",
    "azema_conditional_check",
    "sample_last_passage_drift",
    "g_decomposition_check",
    "note2_gk_law_check",
    "conditional_given_g_check",
    "reflection_identity_check",
    "doob_sup_check",
    "put_identity_check",
    "prop9_1_checks",
]
