"""Moments of the running average of the exponential martingale, the
maturity-monotonicity of convex payoffs on it, and the identity in law of the
exponential functional run to an independent exponential time."""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .closedform.asianform import asian_laplace_atilde
from .report import CheckReport
from .rng import RngStream
from .stats import McEstimate, ks_two_sample

__all__ = [
    "a_n_quadrature",
    "a_n_mc",
    "laplace_identity_check",
    "monotonicity_check",
    "exp_time_identity_check",
]

_MAX_N = 4


def a_n_quadrature(n: int, t: float, tol: float = 1e-9) -> float:
    """E[((1/t) int_0^t E_s ds)^n] by nested quadrature over the ordered simplex.

    The Gaussian moment formula turns the n-th moment into
    (n!/t^n) * int_{0 <= s_1 <= ... <= s_n <= t} exp(sum_k (n-k) s_k) ds,
    integrated here by recursively nested adaptive rules (the innermost level
    is analytic).  n is capped at 4 for cost.
    """
    if not 1 <= n <= _MAX_N:
        raise ValueError(f"n must be between 1 and {_MAX_N}")
    if t <= 0:
        raise ValueError("need t > 0")
    if n == 1:
        return 1.0

    def level(k: int, lower: float) -> float:
        # integrate s_k over (lower, t); exponent weight (n - k) per ordering
        weight = n - k
        if k == n:
            # int_lower^t exp(0) = t - lower
            return t - lower
        val, _ = integrate.quad(
            lambda s: np.exp(weight * s) * level(k + 1, s),
            lower,
            t,
            epsabs=tol,
            epsrel=tol,
            limit=100,
        )
        return val

    import math

    return float(math.factorial(n) / t**n * level(1, 0.0))


def a_n_mc(
    rng: RngStream,
    n: int,
    t: float,
    paths: int = 50_000,
    cells_per_unit: int = 2048,
) -> tuple[McEstimate, float]:
    """MC estimate of the n-th moment of the normalized average, trapezoidal
    in time, with one Richardson half-grid comparison as a bias diagnostic.

    Returns (estimate, richardson_gap); a gap large against the standard
    error signals grid coarseness.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    gen = rng.generator
    n_cells = max(2, int(round(cells_per_unit * t)))
    if n_cells % 2:
        n_cells += 1
    dt = t / n_cells
    b = np.zeros(paths)
    fine = 0.5 * np.exp(0.0) * np.ones(paths)  # trapezoid: half weight at s=0
    coarse = fine.copy()
    s = 0.0
    for k in range(1, n_cells + 1):
        b += -0.5 * dt + np.sqrt(dt) * gen.standard_normal(paths)
        s += dt
        e = np.exp(b)
        w = 0.5 if k == n_cells else 1.0
        fine += w * e
        if k % 2 == 0:
            w2 = 0.5 if k == n_cells else 1.0
            coarse += w2 * e
    avg_fine = fine * dt / t
    avg_coarse = coarse * (2.0 * dt) / t
    # coarse grid misses the s=0 half weight correction; both start from 1/2
    est = McEstimate.from_samples(avg_fine**n)
    richardson_gap = float(np.mean(avg_fine**n) - np.mean(avg_coarse**n))
    return est, richardson_gap


def laplace_identity_check(n: int, alpha: float, rel_tol: float = 1e-4) -> CheckReport:
    """int_0^inf e^{-alpha t} t^n a_n(t) dt against the closed product form
    n! / (alpha^2 (alpha-1)(alpha-3)...(alpha - n(n-1)/2))."""
    if alpha <= n * (n - 1) / 2.0 + 1.0:
        raise ValueError("alpha too small: integrability margin requires alpha > n(n-1)/2 + 1")
    target = asian_laplace_atilde(alpha, n)

    def integrand(t):
        if t == 0.0:
            return 0.0
        return np.exp(-alpha * t) * t**n * a_n_quadrature(n, t, tol=1e-10)

    # the integrand decays like e^{-(alpha - n(n-1)/2) t}; 60 e-foldings suffice
    hi = 60.0 / (alpha - n * (n - 1) / 2.0)
    val, _ = integrate.quad(integrand, 0.0, hi, epsabs=1e-12, epsrel=1e-8, limit=200)
    rel_err = abs(val - target) / target
    est = McEstimate(mean=float(val), std_error=0.0, n=1)
    return CheckReport(
        label=f"asian-laplace(n={n},alpha={alpha})",
        analytic=float(target),
        estimate=est,
        z_score=float(rel_err),
        passed=bool(rel_err < rel_tol),
        threshold=rel_tol,
        extras={"relative_error": float(rel_err)},
    )


def monotonicity_check(
    rng: RngStream,
    g: Callable[[np.ndarray], np.ndarray],
    t_grid: Sequence[float] = (0.25, 0.5, 1.0, 2.0, 4.0),
    n: int = 20_000,
    cells_per_unit: int = 512,
    threshold: float = 3.0,
    label: str = "asian-monotonicity",
) -> CheckReport:
    """E[g(average up to t)] is nondecreasing in t for convex g.

    A single ensemble of paths drives every maturity (common random numbers),
    so each adjacent difference is tested at *threshold* standard errors in
    the one-sided sense: mean difference > -threshold * se.
    """
    t_grid = sorted(t_grid)
    gen = rng.generator
    t_max = t_grid[-1]
    n_cells = int(round(cells_per_unit * t_max))
    dt = t_max / n_cells
    marks = set()
    mark_of_cell = {}
    for t in t_grid:
        k = int(round(t / dt))
        marks.add(k)
        mark_of_cell[k] = t

    b = np.zeros(n)
    integral = np.zeros(n)
    values = {}
    prev_e = np.ones(n)
    for k in range(1, n_cells + 1):
        b += -0.5 * dt + np.sqrt(dt) * gen.standard_normal(n)
        e = np.exp(b)
        integral += 0.5 * (prev_e + e) * dt
        prev_e = e
        if k in marks:
            t = mark_of_cell[k]
            values[t] = g(integral / t)

    diffs = {}
    ok = True
    for t_prev, t_next in zip(t_grid[:-1], t_grid[1:]):
        d = McEstimate.from_samples(values[t_next] - values[t_prev])
        z = d.z_score(0.0)
        diffs[f"{t_prev}->{t_next}"] = {"mean": d.mean, "se": d.std_error, "z": float(z)}
        ok &= z > -threshold
    first, last = t_grid[0], t_grid[-1]
    overall = McEstimate.from_samples(values[last] - values[first])
    return CheckReport(
        label=label,
        analytic=0.0,
        estimate=overall,
        z_score=float(overall.z_score(0.0)),
        passed=bool(ok),
        threshold=threshold,
        extras={"adjacent_differences": diffs, "t_grid": list(t_grid)},
    )


def exp_time_identity_check(
    rng: RngStream,
    nu: float,
    lam: float,
    n: int = 10_000,
    cells_per_unit: int = 512,
    p_threshold: float = 0.01,
) -> CheckReport:
    """int_0^{T_lam} exp(2(B_s + nu s)) ds, with T_lam an independent Exp(lam)
    time, has the law beta(1, a) / (2 gamma(b)).

    Here mu = sqrt(2 lam + nu^2), a = (mu + nu)/2, b = (mu - nu)/2 (both must
    be positive).  The path side is a trapezoidal integral on a fine grid run
    to each path's own exponential horizon; the oracle side is sampled from
    the beta/gamma representation directly.  Two-sample KS at p_threshold.
    """
    mu = np.sqrt(2.0 * lam + nu**2)
    a = (mu + nu) / 2.0
    b = (mu - nu) / 2.0
    if a <= 0 or b <= 0:
        raise ValueError("need mu > |nu|, i.e. lam > 0")
    gen = rng.substream(0).generator
    horizons = gen.standard_exponential(n) / lam
    t_max = float(horizons.max())
    dt = 1.0 / cells_per_unit
    n_cells = int(np.ceil(t_max / dt))

    x = np.zeros(n)
    integral = np.zeros(n)
    prev_val = np.ones(n)  # exp(2(B_0 + 0)) = 1
    t = 0.0
    for _ in range(n_cells):
        step = np.minimum(dt, np.maximum(horizons - t, 0.0))
        active = step > 0
        x = x + np.where(active, nu * step + np.sqrt(step) * gen.standard_normal(n), 0.0)
        val = np.exp(2.0 * x)
        integral += np.where(active, 0.5 * (prev_val + val) * step, 0.0)
        prev_val = val
        t += dt
        if not np.any(horizons > t):
            break

    gen2 = rng.substream(1).generator
    oracle = gen2.beta(1.0, a, n) / (2.0 * gen2.gamma(b, 1.0, n))
    d_stat, p_val = ks_two_sample(integral, oracle)
    est = McEstimate.from_samples(integral)
    return CheckReport(
        label=f"asian-exp-time(nu={nu},lam={lam})",
        analytic=float(np.mean(oracle)),
        estimate=est,
        z_score=float(d_stat),
        passed=bool(p_val > p_threshold),
        threshold=p_threshold,
        extras={"ks_stat": float(d_stat), "ks_pvalue": float(p_val), "a": float(a), "b": float(b)},
    )