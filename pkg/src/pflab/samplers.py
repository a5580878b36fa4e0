"""Exact samplers for the laws used throughout the formula checks.

Everything here draws from a closed-form law (no discretization): standard
building blocks (normal, uniform, exponential, beta, gamma), the arcsine law
of the last zero before t, the level-hitting time ``T_x = x^2 / N^2``, the
two-sided size-biased variable ``m1 = eps * sqrt(2 e)`` with density
``|u| exp(-u^2/2) / 2``, Brownian-bridge interior points, and the BES(3)
marginal realized as the norm of a 3-d Gaussian vector.
"""

from __future__ import annotations

import numpy as np

from .rng import RngStream

__all__ = [
    "standard_normal",
    "uniform",
    "exponential",
    "beta",
    "gamma",
    "m_tilde_one",
    "arcsine_last_zero",
    "hitting_time",
    "sample_bridge_point",
    "sample_pf_interior_pair",
    "sample_bes3_at",
    "m_tilde_cdf",
    "arcsine_cdf",
    "hitting_time_cdf",
]


def standard_normal(rng: RngStream, size=None) -> np.ndarray:
    return rng.generator.standard_normal(size)


def uniform(rng: RngStream, size=None) -> np.ndarray:
    return rng.generator.random(size)


def exponential(rng: RngStream, size=None) -> np.ndarray:
    return rng.generator.standard_exponential(size)


def beta(rng: RngStream, a: float, b: float, size=None) -> np.ndarray:
    if a <= 0 or b <= 0:
        raise ValueError("beta parameters must be positive")
    return rng.generator.beta(a, b, size)


def gamma(rng: RngStream, shape: float, size=None) -> np.ndarray:
    if shape <= 0:
        raise ValueError("gamma shape must be positive")
    return rng.generator.gamma(shape, 1.0, size)


def m_tilde_one(rng: RngStream, size=None) -> np.ndarray:
    """Signed magnitude of a Brownian path at t past its last zero.

    ``m1 = eps * sqrt(2 e)`` with eps a symmetric sign and e standard
    exponential; density ``|u| exp(-u^2 / 2) / 2`` on the whole line.
    """
    g = rng.generator
    mag = np.sqrt(2.0 * g.standard_exponential(size))
    sign = np.where(g.random(size) < 0.5, -1.0, 1.0)
    return sign * mag


def m_tilde_cdf(u) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    upper = 1.0 - 0.5 * np.exp(-(u**2) / 2.0)
    lower = 0.5 * np.exp(-(u**2) / 2.0)
    return np.where(u >= 0, upper, lower)


def arcsine_last_zero(rng: RngStream, t: float, size=None) -> np.ndarray:
    """Last zero before *t* of a standard Brownian motion, arcsine on (0, t)."""
    if t <= 0:
        raise ValueError("horizon t must be positive")
    u = rng.generator.random(size)
    return t * np.sin(0.5 * np.pi * u) ** 2


def arcsine_cdf(x, t: float) -> np.ndarray:
    x = np.clip(np.asarray(x, dtype=float) / t, 0.0, 1.0)
    return (2.0 / np.pi) * np.arcsin(np.sqrt(x))


def hitting_time(rng: RngStream, x: float, size=None) -> np.ndarray:
    """First time standard Brownian motion reaches level x: ``x^2 / N^2``."""
    if x == 0:
        raise ValueError("level must be nonzero")
    n = rng.generator.standard_normal(size)
    return (x / n) ** 2


def hitting_time_cdf(t, x: float) -> np.ndarray:
    from scipy.special import ndtr

    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    pos = t > 0
    # P(x^2/N^2 <= t) = P(|N| >= |x|/sqrt(t))
    out[pos] = 2.0 * (1.0 - ndtr(np.abs(x) / np.sqrt(t[pos])))
    return out


# --------------------------------------------------------------------------
# Brownian-bridge interior sampling
# --------------------------------------------------------------------------

def sample_bridge_point(rng: RngStream, s: float, t: float, x: float, y: float, u, size=None) -> np.ndarray:
    """B_u given B_s = x and B_t = y for s < u < t.

    Gaussian with mean ``x + (u-s)/(t-s) * (y-x)`` and variance
    ``(u-s)(t-u)/(t-s)``; the law does not depend on any drift because the
    bridge of a drifted Brownian motion is drift-free given its endpoints.
    """
    u_arr = np.asarray(u, dtype=float)
    if np.any(u_arr <= s) or np.any(u_arr >= t):
        raise ValueError("interior time must satisfy s < u < t")
    frac = (u_arr - s) / (t - s)
    mean = x + frac * (y - x)
    var = (u_arr - s) * (t - u_arr) / (t - s)
    return mean + np.sqrt(var) * rng.generator.standard_normal(size)


def sample_pf_interior_pair(
    rng: RngStream,
    s_outer: float,
    t_outer: float,
    x: float,
    y: float,
    s: float,
    t: float,
    size=None,
) -> tuple[np.ndarray, np.ndarray]:
    """Joint draw of (B_s, B_t) given B_{s'} = x, B_{t'} = y, s' < s < t < t'.

    Sampled sequentially: B_s from the outer bridge, then B_t from the bridge
    between (s, B_s) and (t', y); the Markov property makes this the exact
    joint law, with Cov(B_s, B_t) = (s - s')(t' - t)/(t' - s').
    """
    if not (s_outer < s < t < t_outer):
        raise ValueError("need s' < s < t < t'")
    b_s = sample_bridge_point(rng, s_outer, t_outer, x, y, s, size)
    frac = (t - s) / (t_outer - s)
    mean = b_s + frac * (y - b_s)
    var = (t - s) * (t_outer - t) / (t_outer - s)
    b_t = mean + np.sqrt(var) * rng.generator.standard_normal(np.shape(b_s) or None)
    return b_s, b_t


def sample_bes3_at(rng: RngStream, t: float, a: float, size=None) -> np.ndarray:
    """BES(3) marginal at time *t* started from a > 0.

    Realized exactly as the norm of a 3-d Brownian motion started at
    (a, 0, 0); no SDE discretization is involved, so the 1/x singularity of
    the radial drift never enters.
    """
    if t <= 0:
        raise ValueError("time must be positive")
    if a <= 0:
        raise ValueError("starting point must be positive")
    g = rng.generator
    shape = (3,) if size is None else (3,) + tuple(np.atleast_1d(size))
    w = np.sqrt(t) * g.standard_normal(shape)
    w[0] += a
    r = np.sqrt(np.sum(w**2, axis=0))
    return r if size is not None else float(r)
