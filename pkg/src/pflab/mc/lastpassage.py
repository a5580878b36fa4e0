"""Sampling last-passage times from paths, with exact per-cell crossing
corrections, and the checks that pit them against the closed-form laws."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..closedform.bridge import DriftLevel, sigma_pf
from ..closedform.gbm import laplace_gK_killed_bm, laplace_gK_inv_bes3
from ..closedform.lastzero import SubProbabilityLaw, conditional_given_g
from ..grids import TimeGrid, graded_edges
from ..report import CheckReport
from ..rng import RngStream
from ..stats import EmpiricalDistribution, McEstimate, ks_statistic, ks_two_sample
from .crossing import bes3_cell_dip_prob, cell_cross_prob, refine_last_cross

__all__ = [
    "LastPassageSample",
    "sample_g_finite_horizon",
    "sample_g_ensemble",
    "azema_conditional_check",
    "sample_last_passage_drift",
    "g_decomposition_check",
    "note2_gk_law_check",
    "conditional_given_g_check",
]


@dataclass(frozen=True)
class LastPassageSample:
    """A single draw of the last visit time; hit_any is False when the level
    was never reached (g = 0 then carries the atom)."""

    g: float
    hit_any: bool


def sample_g_ensemble(
    rng: RngStream,
    nu: float,
    level: float,
    t: float,
    n_cells: int,
    n_paths: int,
    bridge_corrected: bool = True,
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized draws of g = sup{s <= t : B_s + nu s = level}.

    The drifted path is simulated exactly on the grid; a within-cell crossing
    is declared either by an endpoint sign change alone (uncorrected) or by a
    Bernoulli draw with the exact bridge probability (corrected).  The
    location inside the flagged cell comes from one bisection level
    (corrected) or the right cell edge (uncorrected).
    Returns (g, hit_any).
    """
    g = rng.generator
    dt = t / n_cells
    z = np.zeros(n_paths)
    last_t0 = np.zeros(n_paths)
    last_a = np.zeros(n_paths)
    last_b = np.zeros(n_paths)
    hit = np.zeros(n_paths, dtype=bool)

    t0 = 0.0
    for _ in range(n_cells):
        z_new = z + nu * dt + np.sqrt(dt) * g.standard_normal(n_paths)
        straddle = (z - level) * (z_new - level) <= 0
        if bridge_corrected:
            p = cell_cross_prob(z, z_new, level, dt)
            crossed = straddle | (g.random(n_paths) < p)
        else:
            crossed = straddle
        if np.any(crossed):
            last_t0[crossed] = t0
            last_a[crossed] = z[crossed]
            last_b[crossed] = z_new[crossed]
            hit |= crossed
        z = z_new
        t0 += dt

    g_out = np.zeros(n_paths)
    if np.any(hit):
        if bridge_corrected:
            g_out[hit] = refine_last_cross(
                g, last_t0[hit], last_t0[hit] + dt, last_a[hit], last_b[hit], level
            )
        else:
            g_out[hit] = last_t0[hit] + dt
    return g_out, hit


def sample_g_finite_horizon(
    rng: RngStream,
    nu: float,
    level: float,
    t: float,
    grid: TimeGrid,
    bridge_corrected: bool = True,
) -> LastPassageSample:
    """Single-path version of :func:`sample_g_ensemble` on an explicit grid."""
    pts = grid.points
    if abs(pts[0]) > 1e-12 or abs(pts[-1] - t) > 1e-9:
        raise ValueError("grid must span [0, t]")
    n_cells = len(grid) - 1
    if np.ptp(grid.dt) > 1e-12 * t:
        # general grids: fall back to a cell-by-cell scalar walk
        g = rng.generator
        z = 0.0
        best = None
        for t0, t1 in zip(pts[:-1], pts[1:]):
            dt = t1 - t0
            z_new = z + nu * dt + np.sqrt(dt) * g.standard_normal()
            crossed = (z - level) * (z_new - level) <= 0
            if not crossed and bridge_corrected:
                crossed = g.random() < cell_cross_prob(z, z_new, level, dt)
            if crossed:
                best = (t0, t1, z, z_new)
            z = z_new
        if best is None:
            return LastPassageSample(0.0, False)
        t0, t1, a, b = best
        if bridge_corrected:
            loc = float(refine_last_cross(g, np.asarray(t0), np.asarray(t1), np.asarray(a), np.asarray(b), level))
        else:
            loc = t1
        return LastPassageSample(loc, True)
    g_vals, hits = sample_g_ensemble(rng, nu, level, t, n_cells, 1, bridge_corrected)
    return LastPassageSample(float(g_vals[0]), bool(hits[0]))


# --------------------------------------------------------------------------
# Conditional (bridge) no-crossing probability vs the closed form
# --------------------------------------------------------------------------

def azema_conditional_check(
    rng: RngStream,
    s: float,
    t: float,
    x: float,
    y: float,
    nu: float,
    level: float,
    n: int = 10_000,
    n_cells: int = 64,
    threshold: float = 3.0,
) -> CheckReport:
    """P(no visit to the level in (s, t) | drifted endpoints x at s, y at t).

    The bridge between given endpoints does not depend on the drift, so the
    interior is sampled as a plain Brownian bridge; the estimator averages the
    product over cells of the exact per-cell survival probabilities, and the
    analytic target is the conditional-survival formula evaluated in the
    driftless coordinates.
    """
    if not s < t:
        raise ValueError("need s < t")
    g = rng.generator
    dt = (t - s) / n_cells
    cur = np.full(n, float(x))
    survive = np.ones(n)
    for k in range(n_cells):
        remain = t - (s + k * dt)
        if k < n_cells - 1:
            mean = cur + (dt / remain) * (y - cur)
            var = dt * (remain - dt) / remain
            nxt = mean + np.sqrt(max(var, 0.0)) * g.standard_normal(n)
        else:
            nxt = np.full(n, float(y))
        survive *= 1.0 - cell_cross_prob(cur, nxt, level, dt)
        cur = nxt
    est = McEstimate.from_samples(survive)
    lvl = DriftLevel(nu, level)
    analytic = float(sigma_pf(s, t, x - nu * s, y - nu * t, lvl))
    return CheckReport.from_estimate(
        f"azema-survival(s={s},t={t},x={x},y={y},nu={nu},l={level})",
        analytic,
        est,
        threshold,
    )


# --------------------------------------------------------------------------
# Infinite-horizon last passage for drifted Brownian motion
# --------------------------------------------------------------------------

def sample_last_passage_drift(
    rng: RngStream,
    nu: float,
    level: float,
    n_paths: int,
    start: float = 0.0,
    fine_horizon: float = 1.0,
    n_fine: int = 512,
    stop_eps: float = 1e-6,
    t_max: float = 2000.0,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Draws of G = sup{s : B_s + nu s = level} from a drifted path (nu != 0).

    Simulation stops once the escape-probability bound exp(-2|nu| gap) drops
    below stop_eps (the path has drifted too far past the level on the
    transient side to ever return); leftover paths at t_max are censored.
    Returns (g, hit_any, censored).
    """
    if nu == 0:
        raise ValueError("drift must be nonzero for a finite last-passage time")
    g = rng.generator
    edges = graded_edges(fine_horizon, t_max, n_fine=n_fine, growth=0.02, power=1.0)
    gap_stop = -np.log(stop_eps) / (2.0 * abs(nu))

    z = np.full(n_paths, float(start))
    active = np.ones(n_paths, dtype=bool)
    hit = np.zeros(n_paths, dtype=bool)
    last_t0 = np.zeros(n_paths)
    last_dt = np.full(n_paths, edges[1] - edges[0])
    last_a = np.zeros(n_paths)
    last_b = np.zeros(n_paths)

    for t0, t1 in zip(edges[:-1], edges[1:]):
        if not np.any(active):
            break
        dt = t1 - t0
        z_new = z.copy()
        z_new[active] = z[active] + nu * dt + np.sqrt(dt) * g.standard_normal(int(active.sum()))
        straddle = (z - level) * (z_new - level) <= 0
        p = cell_cross_prob(z, z_new, level, dt)
        crossed = active & (straddle | (g.random(n_paths) < p))
        if np.any(crossed):
            last_t0[crossed] = t0
            last_dt[crossed] = dt
            last_a[crossed] = z[crossed]
            last_b[crossed] = z_new[crossed]
            hit |= crossed
        # transient side: drift carries the path away from the level
        away = np.sign(z_new - level) == np.sign(nu)
        escaped = away & (np.abs(z_new - level) > gap_stop)
        active &= ~escaped
        z = z_new

    censored = active.copy()
    g_out = np.zeros(n_paths)
    if np.any(hit):
        g_out[hit] = refine_last_cross(
            g, last_t0[hit], last_t0[hit] + last_dt[hit], last_a[hit], last_b[hit], level
        )
    return g_out, hit, censored


def g_decomposition_check(
    rng: RngStream,
    a: float,
    nu: float,
    n: int = 10_000,
    p_threshold: float = 0.01,
) -> CheckReport:
    """Path-sampled G_a^(nu) against the strong-Markov composition
    T_a^(nu) + N^2/nu^2 (first passage plus an independent last zero).

    T_a^(nu) for drift toward the level is inverse Gaussian with mean a/nu and
    shape a^2, sampled exactly.
    """
    if a <= 0 or nu <= 0:
        raise ValueError("need a > 0, nu > 0 (drift toward the level)")
    g_path, hit, censored = sample_last_passage_drift(rng.substream(0), nu, a, n)
    g_path = g_path[hit & ~censored]

    gen = rng.substream(1).generator
    t_a = gen.wald(a / nu, a**2, n)
    tail = (gen.standard_normal(n) / nu) ** 2
    composed = t_a + tail

    d_stat, p_val = ks_two_sample(g_path, composed)
    est = McEstimate.from_samples(g_path)
    return CheckReport(
        label=f"g-decomposition(a={a},nu={nu})",
        analytic=float(np.mean(composed)),
        estimate=est,
        z_score=float(d_stat),
        passed=bool(p_val > p_threshold),
        threshold=p_threshold,
        extras={
            "ks_stat": float(d_stat),
            "ks_pvalue": float(p_val),
            "censor_rate": float(np.mean(censored)),
            "z_is_ks_stat": True,
        },
    )


# --------------------------------------------------------------------------
# Last visit to K for killed Brownian motion and the reciprocal BES(3)
# --------------------------------------------------------------------------

def _last_visit_killed_bm(
    rng: RngStream,
    K: float,
    n_paths: int,
    t_max: float = 4.0e6,
    growth: float = 0.005,
) -> tuple[np.ndarray, np.ndarray]:
    """G_K = last visit to K in (0,1) of Brownian motion from 1 killed at 0.

    Graded cells track the t^{-3/2} tail of the law so the in-cell location
    error stays below the KS resolution; within the death cell the K-visit is
    credited only when the cell is entered from above K, where the crossing
    order is forced by continuity.
    Returns (g, censored).
    """
    gen = rng.generator
    edges = graded_edges(1.0, t_max, n_fine=512, growth=growth, power=1.5)
    z = np.ones(n_paths)
    alive = np.ones(n_paths, dtype=bool)
    g_loc = np.zeros((n_paths, 3))  # t0, dt, placeholder for refinement
    g_ab = np.zeros((n_paths, 2))
    have_g = np.zeros(n_paths, dtype=bool)

    for t0, t1 in zip(edges[:-1], edges[1:]):
        if not np.any(alive):
            break
        dt = t1 - t0
        z_new = z.copy()
        idx = alive
        z_new[idx] = z[idx] + np.sqrt(dt) * gen.standard_normal(int(idx.sum()))

        u_kill = gen.random(n_paths)
        u_cross = gen.random(n_paths)
        p_kill = cell_cross_prob(z, z_new, 0.0, dt)
        p_cross = cell_cross_prob(z, z_new, K, dt)
        dies = alive & ((z * z_new <= 0) | (u_kill < p_kill))
        # entirely above K a dip to 0 passes through K, so the same uniform
        # drives both events (p_kill <= p_cross) and death implies a crossing
        above = (z > K) & (z_new > K)
        extra = np.where(above, u_kill < p_cross, u_cross < p_cross)
        crosses = alive & (((z - K) * (z_new - K) <= 0) | extra)
        # inside a death cell the order of events is only certain from above
        credit = crosses & (~dies | (z > K))
        if np.any(credit):
            g_loc[credit, 0] = t0
            g_loc[credit, 1] = dt
            g_ab[credit, 0] = z[credit]
            g_ab[credit, 1] = z_new[credit]
            have_g |= credit

        alive &= ~dies
        z = z_new

    censored = alive.copy()
    g_out = np.zeros(n_paths)
    if np.any(have_g):
        g_out[have_g] = refine_last_cross(
            gen, g_loc[have_g, 0], g_loc[have_g, 0] + g_loc[have_g, 1], g_ab[have_g, 0], g_ab[have_g, 1], K
        )
    return g_out, censored


def _last_visit_inv_bes3(
    rng: RngStream,
    K: float,
    n_paths: int,
    t_max: float = 1.0e9,
    growth: float = 0.005,
    stop_ratio: float = 2.0e-4,
) -> tuple[np.ndarray, np.ndarray]:
    """G_K = last visit of 1/R to K, R a BES(3) from 1 (level a = 1/K >= 1).

    R is simulated as the norm of a 3-d Brownian motion (exact increments for
    any cell size); within-cell dips use the positively-conditioned bridge
    formula.  Paths stop once the return bound a/r falls below stop_ratio.
    Returns (g, censored).
    """
    a_lvl = 1.0 / K
    gen = rng.generator
    edges = graded_edges(1.0, t_max, n_fine=512, growth=growth, power=1.5)
    w = np.zeros((n_paths, 3))
    w[:, 0] = 1.0
    r = np.ones(n_paths)
    active = np.ones(n_paths, dtype=bool)
    have_g = np.zeros(n_paths, dtype=bool)
    loc = np.zeros((n_paths, 4))  # t0, dt, r0, r1

    for t0, t1 in zip(edges[:-1], edges[1:]):
        if not np.any(active):
            break
        dt = t1 - t0
        w_new = w.copy()
        na = int(active.sum())
        w_new[active] = w[active] + np.sqrt(dt) * gen.standard_normal((na, 3))
        r_new = np.linalg.norm(w_new, axis=1)

        above = (r > a_lvl) & (r_new > a_lvl)
        below = (r < a_lvl) & (r_new < a_lvl)
        p = np.where(
            above,
            bes3_cell_dip_prob(r, r_new, a_lvl, dt),
            np.where(below, cell_cross_prob(r, r_new, a_lvl, dt), 1.0),
        )
        crossed = active & (gen.random(n_paths) < p)
        if np.any(crossed):
            loc[crossed, 0] = t0
            loc[crossed, 1] = dt
            loc[crossed, 2] = r[crossed]
            loc[crossed, 3] = r_new[crossed]
            have_g |= crossed

        active &= ~(a_lvl / np.maximum(r_new, 1e-12) < stop_ratio)
        w = w_new
        r = r_new

    censored = active.copy()
    g_out = np.zeros(n_paths)
    if np.any(have_g):
        g_out[have_g] = refine_last_cross(
            gen, loc[have_g, 0], loc[have_g, 0] + loc[have_g, 1], loc[have_g, 2], loc[have_g, 3], a_lvl
        )
    return g_out, censored


def note2_gk_law_check(
    rng: RngStream,
    K: float,
    n: int = 10_000,
    flavor: str = "killed_bm",
    lam: float = 1.0,
    p_threshold: float = 0.01,
) -> CheckReport:
    """Path-sampled last visit to K against the time-reversal law U_K^2 / N^2.

    flavor 'killed_bm': Brownian motion from 1 killed at 0, U_K uniform on
    [1-K, 1+K] (0 < K < 1).  flavor 'inv_bes3': reciprocal BES(3) from 1,
    U_K uniform on [1/K - 1, 1/K + 1] (0 < K <= 1).  Also checks the Laplace
    functional E[exp(-lam^2 G/2)] against its closed form.
    """
    if flavor == "killed_bm":
        if not 0 < K < 1:
            raise ValueError("killed-BM flavor needs 0 < K < 1")
        g_path, censored = _last_visit_killed_bm(rng.substream(0), K, n)
        lo, hi = 1 - K, 1 + K
        laplace_ref = laplace_gK_killed_bm(lam, K)
    elif flavor == "inv_bes3":
        if not 0 < K <= 1:
            raise ValueError("reciprocal-BES(3) flavor needs 0 < K <= 1")
        g_path, censored = _last_visit_inv_bes3(rng.substream(0), K, n)
        lo, hi = 1.0 / K - 1.0, 1.0 / K + 1.0
        laplace_ref = laplace_gK_inv_bes3(lam, K)
    else:
        raise ValueError(f"unknown flavor {flavor!r}")

    keep = ~censored
    g_path = g_path[keep]
    gen = rng.substream(1).generator
    u = gen.uniform(lo, hi, n)
    oracle = (u / gen.standard_normal(n)) ** 2

    d_stat, p_val = ks_two_sample(g_path, oracle)
    lap_est = McEstimate.from_samples(np.exp(-(lam**2) * g_path / 2.0))
    lap_z = lap_est.z_score(laplace_ref)
    return CheckReport(
        label=f"note2-gk({flavor},K={K})",
        analytic=laplace_ref,
        estimate=lap_est,
        z_score=float(lap_z),
        passed=bool(p_val > p_threshold and abs(lap_z) <= 3.0),
        threshold=p_threshold,
        extras={
            "ks_stat": float(d_stat),
            "ks_pvalue": float(p_val),
            "censor_rate": float(np.mean(censored)),
            "laplace_lambda": lam,
        },
    )


# --------------------------------------------------------------------------
# Conditional law of the exponential martingale given its last unit time
# --------------------------------------------------------------------------

def conditional_given_g_check(
    rng: RngStream,
    t: float,
    f: Callable[[np.ndarray], np.ndarray],
    n: int = 100_000,
    n_buckets: int = 20,
    bucket_index: int | None = None,
    n_cells: int = 512,
    threshold: float = 3.0,
) -> list[CheckReport]:
    """Bucket paths by the last visit of B_s - s/2 to 0 and compare the bucket
    mean of f(exp(B_t - t/2)) with the conditional closed form at the bucket
    center (lam = sqrt(t - g)).

    Returns one report per evaluated bucket; empty buckets are skipped.
    """
    gen = rng.generator
    dt = t / n_cells
    z = np.zeros(n)
    last_t0 = np.zeros(n)
    last_a = np.zeros(n)
    last_b = np.zeros(n)
    hit = np.zeros(n, dtype=bool)
    t0 = 0.0
    for _ in range(n_cells):
        z_new = z - 0.5 * dt + np.sqrt(dt) * gen.standard_normal(n)
        p = cell_cross_prob(z, z_new, 0.0, dt)
        crossed = (z * z_new <= 0) | (gen.random(n) < p)
        last_t0[crossed] = t0
        last_a[crossed] = z[crossed]
        last_b[crossed] = z_new[crossed]
        hit |= crossed
        z = z_new
        t0 += dt
    g_vals = np.zeros(n)
    g_vals[hit] = refine_last_cross(gen, last_t0[hit], last_t0[hit] + dt, last_a[hit], last_b[hit], 0.0)
    values = f(np.exp(z))

    edges = np.linspace(0.0, t, n_buckets + 1)
    indices = range(n_buckets) if bucket_index is None else [bucket_index]
    reports = []
    for k in indices:
        lo, hi = edges[k], edges[k + 1]
        sel = hit & (g_vals >= lo) & (g_vals < hi)
        if sel.sum() < 50:
            continue
        center = 0.5 * (lo + hi)
        analytic = conditional_given_g(float(np.sqrt(t - center)), f)
        est = McEstimate.from_samples(values[sel])
        reports.append(
            CheckReport.from_estimate(
                f"conditional-given-g(t={t},bucket={k})", analytic, est, threshold, bucket=(lo, hi)
            )
        )
    return reports
