"""Exponential martingales of spectrally negative compound-Poisson processes:
the maximal law, the conditional-survival formula at a fixed time, and the
jump-compensator ("Tanaka") representation of the call price."""

from __future__ import annotations

import numpy as np

from .processes import LevyModel, sample_levy_terminal
from .report import CheckReport
from .rng import RngStream
from .stats import EmpiricalDistribution, McEstimate, ks_statistic

__all__ = [
    "psi_empirical_check",
    "sup_law_check",
    "azema_stopping_check",
    "tanaka_phi",
    "tanaka_identity_check",
    "simulate_esscher_events",
]


def _require_active(model: LevyModel):
    if model.jump_rate == 0:
        raise ValueError("jump rate 0 gives the constant martingale M = 1; no maximal law to test")


def simulate_esscher_events(
    rng: RngStream,
    model: LevyModel,
    n: int,
    t_mark: float | None = None,
    level: float | None = None,
    stop_eps: float = 1e-6,
    max_rounds: int = 4000,
) -> dict:
    """Event-driven exact simulation of M_t = exp(X_t - t psi(1)).

    Between jumps, log M grows linearly at rate drift - psi(1) > 0 (for any
    active model), so path suprema sit at pre-jump instants and level
    crossings are certain segment-wise events: no discretization enters.
    Tracks the running supremum, the value at ``t_mark``, and whether the
    level is reached at some time > t_mark.  A path stops once M/stop_scale
    says no further record or crossing can occur (probability below
    stop_eps, by the conditional maximal bound).
    """
    _require_active(model)
    gen = rng.generator
    slope = model.drift - model.psi(1.0)  # log M drift between jumps, > 0
    if slope <= 0:
        raise AssertionError("spectrally negative Esscher exponent must creep upward")
    theta = model.jump_exp_rate
    rate = model.jump_rate

    t = np.zeros(n)
    logm = np.zeros(n)
    running_max = np.zeros(n)
    logm_at_mark = np.full(n, np.nan)
    crossed_after_mark = np.zeros(n, dtype=bool)
    active = np.ones(n, dtype=bool)
    floor = np.log(stop_eps)
    log_level = np.log(level) if level is not None else None

    for _ in range(max_rounds):
        if not np.any(active):
            break
        gap = gen.standard_exponential(n) / rate
        t_next = t + gap
        logm_pre = logm + slope * gap  # left limit at the jump

        if t_mark is not None:
            passes_mark = active & (t < t_mark) & (t_next >= t_mark)
            logm_at_mark[passes_mark] = logm[passes_mark] + slope * (t_mark - t[passes_mark])

        if log_level is not None and t_mark is not None:
            # M rises over [t, t_next), so the segment visits the level after
            # the mark iff it ends past the mark and peaks at or above it
            crossed_after_mark |= active & (t_next > t_mark) & (logm_pre >= log_level)

        np.maximum(running_max, np.where(active, logm_pre, -np.inf), out=running_max)
        jumps = gen.standard_exponential(n) / theta
        logm_new = logm_pre - jumps

        t = np.where(active, t_next, t)
        logm = np.where(active, logm_new, logm)

        # conditional maximal bound: P(M ever reaches level v again | M_t) <= M_t / v
        if log_level is None:
            done = (logm - running_max) < floor
        else:
            done = crossed_after_mark | ((logm - log_level) < floor)
        if t_mark is not None:
            done &= t >= t_mark
        active &= ~done

    return {
        "sup": np.exp(running_max),
        "m_at_mark": np.exp(logm_at_mark) if t_mark is not None else None,
        "crossed_after_mark": crossed_after_mark,
        "censored": active.copy(),
    }


def psi_empirical_check(rng: RngStream, model: LevyModel, t: float = 1.0, n: int = 200_000, threshold: float = 3.0) -> CheckReport:
    """(1/t) log E[exp(X_t)] estimated by MC against the Laplace exponent."""
    x = sample_levy_terminal(rng, model, t, n)
    w = np.exp(x)
    est = McEstimate.from_samples(w)
    target = float(np.exp(t * model.psi(1.0)))
    # delta method: se of log-mean is se/mean
    z = (np.log(est.mean) - t * model.psi(1.0)) / (est.std_error / est.mean)
    return CheckReport(
        label=f"psi-empirical(c={model.drift},rho={model.jump_rate})",
        analytic=target,
        estimate=est,
        z_score=float(z),
        passed=bool(abs(z) <= threshold),
        threshold=threshold,
        extras={"psi_one": model.psi(1.0)},
    )


def sup_law_check(rng: RngStream, model: LevyModel, n: int = 100_000, p_threshold: float = 0.01) -> CheckReport:
    """1 / sup M is uniform: the maximal identity survives downward jumps
    because records are still set continuously (no positive jumps)."""
    _require_active(model)
    out = simulate_esscher_events(rng, model, n)
    keep = ~out["censored"]
    sup = out["sup"][keep]
    emp = EmpiricalDistribution.from_samples(1.0 / sup)
    d_stat, p_val = ks_statistic(emp, lambda u: np.clip(u, 0.0, 1.0))
    est = McEstimate.from_samples((sup >= 2.0).astype(float))
    z2 = est.z_score(0.5)
    censor_rate = float(np.mean(out["censored"]))
    return CheckReport(
        label=f"sup-law-levy(c={model.drift},rho={model.jump_rate})",
        analytic=0.5,
        estimate=est,
        z_score=float(z2),
        passed=bool(p_val > p_threshold and abs(z2) <= 3.0 and censor_rate < 1e-3),
        threshold=p_threshold,
        extras={"ks_stat": float(d_stat), "ks_pvalue": float(p_val), "censor_rate": censor_rate},
    )


def azema_stopping_check(
    rng: RngStream,
    model: LevyModel,
    T: float,
    K: float,
    f=None,
    n: int = 100_000,
    threshold: float = 3.0,
) -> CheckReport:
    """Pairing test of P(G_K > T | F_T) = (M_T / K) ^ 1 at a fixed time T:
    E[f(M_T) 1_{G_K > T}] = E[f(M_T) min(M_T/K, 1)] on common paths."""
    _require_active(model)
    if f is None:
        f = lambda m: np.minimum(m, 2.0)
    out = simulate_esscher_events(rng, model, n, t_mark=T, level=K)
    keep = ~out["censored"]
    m_T = out["m_at_mark"][keep]
    after = out["crossed_after_mark"][keep]
    lhs = f(m_T) * after.astype(float)
    rhs = f(m_T) * np.minimum(m_T / K, 1.0)
    diff = McEstimate.from_samples(lhs - rhs)
    z = diff.z_score(0.0)
    return CheckReport(
        label=f"azema-stopping(T={T},K={K})",
        analytic=float(np.mean(rhs)),
        estimate=McEstimate.from_samples(lhs),
        z_score=float(z),
        passed=bool(abs(z) <= threshold),
        threshold=threshold,
        extras={"diff_mean": diff.mean, "diff_se": diff.std_error, "censor_rate": float(np.mean(out["censored"]))},
    )


def tanaka_phi(
    rng: RngStream,
    model: LevyModel,
    s: float,
    K: float,
    n_u: int = 64,
    n_samples: int = 50_000,
) -> tuple[float, float]:
    """phi(s, K) = int_0^1 mu((0,u)) E[M_s 1_{K < M_s < K/u}] du.

    mu((0,u)) = rate * u^theta is closed-form for exponential jumps; the
    expectation factor is estimated once per u-node from a shared ensemble of
    exact M_s marginals (common random numbers keep it monotone in u).
    Returns (value, standard error from the shared ensemble).
    """
    _require_active(model)
    x = sample_levy_terminal(rng, model, s, n_samples)
    m = np.exp(x - s * model.psi(1.0))
    u_nodes = np.linspace(0.0, 1.0, n_u + 1)
    weights = model.mu_below(u_nodes)
    # trapezoid weights; the u-integral is applied per sample so the reported
    # error is the true Monte Carlo error of the grid estimator
    w_trap = np.full(u_nodes.size, 1.0 / n_u)
    w_trap[0] = w_trap[-1] = 0.5 / n_u
    with np.errstate(divide="ignore"):
        hi = np.where(u_nodes > 0, K / np.maximum(u_nodes, 1e-300), np.inf)
    indic = (m[:, None] > K) & (m[:, None] < hi[None, :])
    per_sample = (m[:, None] * indic) @ (w_trap * weights)
    est = McEstimate.from_samples(per_sample)
    return est.mean, est.std_error


def tanaka_identity_check(
    rng: RngStream,
    model: LevyModel,
    t: float,
    K: float,
    n_time: int = 16,
    n_u: int = 64,
    n_samples: int = 40_000,
    n_lhs: int = 200_000,
    threshold: float = 3.0,
) -> CheckReport:
    """E[(M_t - K)^+] = (1 - K)^+ + int_0^t phi(s, K) ds with full error
    propagation across the time quadrature and the left-hand ensemble."""
    _require_active(model)
    # Simpson needs an even number of intervals
    if n_time % 2 == 1:
        n_time += 1
    s_nodes = np.linspace(0.0, t, n_time + 1)
    phi_vals = np.zeros(s_nodes.size)
    phi_se = np.zeros(s_nodes.size)
    for i, s in enumerate(s_nodes):
        if s == 0.0:
            continue  # M_0 = 1 a.s.; the indicator K < 1 < K/u has zero u-measure weight at u->... value via limit
        phi_vals[i], phi_se[i] = tanaka_phi(rng.substream(i + 1), model, s, K, n_u, n_samples)
    if K < 1.0:
        # s = 0 limit: M_0 = 1 a.s., so E[M_0; K < M_0 < K/u] = 1_{u < K} and
        # the u-integral collapses to rate * K^(theta+1) / (theta+1)
        theta = model.jump_exp_rate
        phi_vals[0] = model.jump_rate * K ** (theta + 1.0) / (theta + 1.0)
    h = t / n_time
    w = np.ones(s_nodes.size)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    w *= h / 3.0
    rhs = max(1.0 - K, 0.0) + float(np.sum(w * phi_vals))
    rhs_se = float(np.sqrt(np.sum((w * phi_se) ** 2)))

    x = sample_levy_terminal(rng.substream(0), model, t, n_lhs)
    m_t = np.exp(x - t * model.psi(1.0))
    lhs_est = McEstimate.from_samples(np.maximum(m_t - K, 0.0))
    z = (lhs_est.mean - rhs) / np.sqrt(lhs_est.std_error**2 + rhs_se**2)
    return CheckReport(
        label=f"tanaka-identity(t={t},K={K})",
        analytic=rhs,
        estimate=lhs_est,
        z_score=float(z),
        passed=bool(abs(z) <= threshold),
        threshold=threshold,
        extras={"rhs_se": rhs_se, "phi_nodes": int(s_nodes.size), "u_nodes": n_u},
    )
