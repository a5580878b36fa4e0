"""Path-level identity checks: the reflection coupling of (S_1, B_1), the
maximal law of the exponential martingale, the finite-horizon put identities
and the measure-symmetry of the last unit-visit time."""

from __future__ import annotations

import numpy as np

from ..closedform.gbm import bs_call_gbm, bs_put_gbm
from ..report import CheckReport
from ..rng import RngStream
from ..stats import EmpiricalDistribution, McEstimate, ks_statistic, ks_two_sample, rank_correlation
from .crossing import cell_cross_prob, sample_cell_max
from .lastpassage import sample_last_passage_drift

__all__ = [
    "reflection_identity_check",
    "doob_sup_check",
    "put_identity_check",
    "prop9_1_checks",
    "sample_gbm_running_max",
]


def reflection_identity_check(
    rng: RngStream,
    n: int = 100_000,
    n_cells: int = 2048,
    p_threshold: float = 0.01,
) -> CheckReport:
    """2 S_1 (S_1 - B_1) is a standard exponential independent of B_1.

    S_1 is the running maximum over [0, 1], made exact by sampling each cell's
    bridge maximum in closed form (so no grid bias enters the law of S_1).
    """
    gen = rng.generator
    dt = 1.0 / n_cells
    b = np.zeros(n)
    s_max = np.zeros(n)
    for _ in range(n_cells):
        b_new = b + np.sqrt(dt) * gen.standard_normal(n)
        cell_max = sample_cell_max(gen.random(n), b, b_new, dt)
        np.maximum(s_max, cell_max, out=s_max)
        b = b_new
    stat = 2.0 * s_max * (s_max - b)

    emp = EmpiricalDistribution.from_samples(stat)
    d_stat, p_val = ks_statistic(emp, lambda x: -np.expm1(-np.maximum(x, 0.0)))
    rho = rank_correlation(stat, b)
    rho_ok = abs(rho) < 3.0 / np.sqrt(n)
    est = McEstimate.from_samples(stat)
    z_mean = est.z_score(1.0)
    return CheckReport(
        label="reflection-identity",
        analytic=1.0,
        estimate=est,
        z_score=float(z_mean),
        passed=bool(p_val > p_threshold and rho_ok and abs(z_mean) <= 3.0),
        threshold=p_threshold,
        extras={
            "ks_stat": float(d_stat),
            "ks_pvalue": float(p_val),
            "rank_corr": float(rho),
            "rank_corr_bound": float(3.0 / np.sqrt(n)),
        },
    )


def sample_gbm_running_max(
    rng: RngStream,
    n: int,
    block_dt: float = 0.25,
    block_cells: int = 16,
    stop_eps: float = 1e-5,
    max_blocks: int = 400,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(sup_t E_t, E at stopping, censored) for E_t = exp(B_t - t/2).

    The exponent is followed with exact per-cell maxima; simulation of a path
    stops once the conditional probability of ever beating its running record
    (current/record, by the maximal identity) falls below stop_eps.  Paths
    still active after max_blocks blocks are flagged censored.
    """
    gen = rng.generator
    x = np.zeros(n)  # log E
    x_max = np.zeros(n)
    active = np.ones(n, dtype=bool)
    dt = block_dt / block_cells
    log_eps = np.log(stop_eps)
    for _ in range(max_blocks):
        if not np.any(active):
            break
        for _ in range(block_cells):
            x_new = x.copy()
            x_new[active] = x[active] - 0.5 * dt + np.sqrt(dt) * gen.standard_normal(int(active.sum()))
            cell_max = sample_cell_max(gen.random(n), x, x_new, dt)
            np.maximum(x_max, np.where(active, cell_max, -np.inf), out=x_max)
            x = x_new
        active &= (x - x_max) > log_eps
    censored = active.copy()
    return np.exp(x_max), np.exp(x), censored


def doob_sup_check(
    rng: RngStream,
    n: int = 100_000,
    p_threshold: float = 0.01,
) -> CheckReport:
    """1 / sup E is uniform on (0, 1) and P(sup >= 2) = 1/2."""
    sup, _, censored = sample_gbm_running_max(rng, n)
    keep = ~censored
    inv = 1.0 / sup[keep]
    emp = EmpiricalDistribution.from_samples(inv)
    d_stat, p_val = ks_statistic(emp, lambda u: np.clip(u, 0.0, 1.0))
    est = McEstimate.from_samples((sup[keep] >= 2.0).astype(float))
    z2 = est.z_score(0.5)
    censor_rate = float(np.mean(censored))
    return CheckReport(
        label="doob-sup-gbm",
        analytic=0.5,
        estimate=est,
        z_score=float(z2),
        passed=bool(p_val > p_threshold and abs(z2) <= 3.0 and censor_rate < 1e-3),
        threshold=p_threshold,
        extras={"ks_stat": float(d_stat), "ks_pvalue": float(p_val), "censor_rate": censor_rate},
    )


def _crossed_after(
    rng_gen,
    x_t: np.ndarray,
    level: float,
    dt: float = 1.0 / 64,
    stop_gap: float = 14.0,
    max_cells: int = 200_000,
) -> np.ndarray:
    """Whether B_u - u/2, continued from x_t, ever reaches *level* again.

    Per-cell exact crossing Bernoullis; a path stops once it has fallen
    stop_gap below the level (return probability exp(-2 * gap * 1/2 * 2) is
    negligible there).
    """
    n = x_t.size
    x = x_t.copy()
    crossed = np.zeros(n, dtype=bool)
    active = np.ones(n, dtype=bool)
    for _ in range(max_cells):
        if not np.any(active):
            break
        x_new = x.copy()
        x_new[active] = x[active] - 0.5 * dt + np.sqrt(dt) * rng_gen.standard_normal(int(active.sum()))
        straddle = (x - level) * (x_new - level) <= 0
        p = cell_cross_prob(x, x_new, level, dt)
        hit = active & (straddle | (rng_gen.random(n) < p))
        crossed |= hit
        active &= ~hit  # one hit settles the indicator
        active &= (level - x_new) < stop_gap
        x = x_new
    return crossed


def put_identity_check(
    rng: RngStream,
    K: float,
    t: float,
    n: int = 20_000,
    n_cells: int = 512,
    threshold: float = 3.0,
) -> CheckReport:
    """Finite-horizon put identities for E_t = exp(B_t - t/2).

    On common paths: (1 - E_t/K)^+ minus the indicator {no visit of E to K
    after t} has mean zero; and K * P(G_K <= t) equals the Black-Scholes put
    E[(K - E_t)^+] (the terminal value (K - E_inf)^+ collapses to K since
    E_inf = 0).
    """
    gen = rng.generator
    level = float(np.log(K))
    dt = t / n_cells
    x = np.zeros(n)
    for _ in range(n_cells):
        x += -0.5 * dt + np.sqrt(dt) * gen.standard_normal(n)
    crossed_after = _crossed_after(gen, x, level)
    lhs = np.maximum(1.0 - np.exp(x) / K, 0.0)
    indicator = (~crossed_after).astype(float)
    diff_est = McEstimate.from_samples(lhs - indicator)
    z1 = diff_est.z_score(0.0)

    eq2_est = McEstimate.from_samples(K * indicator)
    put_ref = bs_put_gbm(t, K)
    z2 = eq2_est.z_score(put_ref)
    return CheckReport(
        label=f"put-identity(K={K},t={t})",
        analytic=put_ref,
        estimate=eq2_est,
        z_score=float(z2),
        passed=bool(abs(z1) <= threshold and abs(z2) <= threshold),
        threshold=threshold,
        extras={
            "pairing_z": float(z1),
            "pairing_mean": diff_est.mean,
            "prob_g_le_t": float(np.mean(indicator)),
        },
    )


def prop9_1_checks(
    rng: RngStream,
    t: float = 1.0,
    n: int = 10_000,
    p_threshold: float = 0.01,
) -> CheckReport:
    """The last unit-visit time of the exponential martingale.

    (i) E[(E_t - 1)^+] equals P(4 N^2 <= t) (the call charges exactly the law
    of the last visit under the tilted measure); (iii) that last-visit law is
    the same under both drifts: path samples of sup{s : B_s +/- s/2 = 0} each
    KS-match 4 N^2.
    """
    gen = rng.substream(0).generator
    call_est = McEstimate.from_samples(np.maximum(np.exp(np.sqrt(t) * gen.standard_normal(4 * n) - t / 2.0) - 1.0, 0.0))
    call_ref = bs_call_gbm(t, 1.0)
    z_call = call_est.z_score(call_ref)

    g_minus, hit_m, cens_m = sample_last_passage_drift(rng.substream(1), -0.5, 0.0, n)
    g_plus, hit_p, cens_p = sample_last_passage_drift(rng.substream(2), 0.5, 0.0, n)
    oracle = 4.0 * rng.substream(3).generator.standard_normal(n) ** 2
    _, p_minus = ks_two_sample(g_minus[~cens_m], oracle)
    _, p_plus = ks_two_sample(g_plus[~cens_p], oracle)

    return CheckReport(
        label=f"prop9-1(t={t})",
        analytic=call_ref,
        estimate=call_est,
        z_score=float(z_call),
        passed=bool(abs(z_call) <= 3.0 and p_minus > p_threshold and p_plus > p_threshold),
        threshold=p_threshold,
        extras={
            "ks_pvalue_drift_minus": float(p_minus),
            "ks_pvalue_drift_plus": float(p_plus),
            "censor_rate": float(0.5 * (np.mean(cens_m) + np.mean(cens_p))),
        },
    )
