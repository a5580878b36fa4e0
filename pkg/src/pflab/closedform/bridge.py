"""Bridge crossing probabilities and the finite-horizon last-zero formulas.

Conventions: all times satisfy s < t; levels are written l (with K = exp(l)
for geometric processes); drifted positions are x + nu*s so evaluators take
the driftless Brownian coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

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
    "heat_kernel",
]


@dataclass(frozen=True)
class DriftLevel:
    """Drift per unit time and a level; K = exp(l) is the geometric level."""

    nu: float = 0.0
    l: float = 0.0

    @classmethod
    def geometric(cls, nu: float, K: float) -> "DriftLevel":
        if K <= 0:
            raise ValueError("geometric level K must be positive")
        return cls(nu, float(np.log(K)))

    @property
    def K(self) -> float:
        return float(np.exp(self.l))


class ClampedProbability(NamedTuple):
    """Probability clamped to [0, 1] plus a flag telling whether the stated
    validity condition of the originating formula held."""

    value: float
    in_domain: bool


def heat_kernel(t, x, y) -> np.ndarray:
    """Gaussian transition density p_t(x, y)."""
    t = np.asarray(t, dtype=float)
    return np.exp(-((np.asarray(y) - np.asarray(x)) ** 2) / (2.0 * t)) / np.sqrt(2.0 * np.pi * t)


def bridge_hit_prob(lam, m, u) -> np.ndarray:
    """P(T_lam < u) for the Brownian bridge 0 -> m over [0, u].

    Equals exp(-(2 lam (lam - m))^+ / u): certain when the level lies between
    the endpoints, exponential in the product of the two gaps otherwise.  This
    is the correction used to de-bias barrier-crossing detection on a grid.
    """
    u = np.asarray(u, dtype=float)
    if np.any(u <= 0):
        raise ValueError("bridge length u must be positive")
    prod = 2.0 * np.asarray(lam) * (np.asarray(lam) - np.asarray(m))
    return np.exp(-np.maximum(prod, 0.0) / u)


def bridge_hit_time_density(lam: float, t, u: float, m: float) -> np.ndarray:
    """Density of the first hitting time of level lam under the 0 -> m bridge.

    (|lam|/t) p_t(0, lam) p_{u-t}(lam, m) / p_u(0, m) for 0 < t < u; integrates
    over (0, u) to bridge_hit_prob(lam, m, u).
    """
    if lam == 0:
        raise ValueError("level must be nonzero (the bridge starts at 0)")
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0) or np.any(t >= u):
        raise ValueError("hit time must lie strictly inside (0, u)")
    return (
        np.abs(lam) / t * heat_kernel(t, 0.0, lam) * heat_kernel(u - t, lam, m) / heat_kernel(u, 0.0, m)
    )


def sloped_sup_prob(a: float, b: float, lam: float, m: float) -> ClampedProbability:
    """P(sup_{t<=1} B_t / (a + b t) > lam | B_1 = m) = exp(-2 lam a (lam(a+b) - m)).

    The formula is stated for lam > m/(a+b) and lam > 0; outside that region
    the clamped value min(formula, 1) is returned with in_domain=False so
    callers can see they are off the supported chart.
    """
    if a <= 0:
        raise ValueError("need a > 0")
    raw = float(np.exp(-2.0 * lam * a * (lam * (a + b) - m)))
    in_domain = (lam > m / (a + b)) and (lam > 0)
    return ClampedProbability(min(raw, 1.0), in_domain)


def sigma_pf(s, t, x, y, lvl: DriftLevel) -> np.ndarray:
    """P(last visit of the drifted path to the level before t is <= s),
    conditionally on the window endpoints.

    Evaluates (1 - exp(-2 (x + nu s - l)(y + nu t - l)/(t - s)))^+ in the
    driftless coordinates x = B_s, y = B_t; zero exactly when the drifted
    endpoints straddle the level (a crossing inside (s, t) is then certain).
    """
    s, t = np.asarray(s, dtype=float), np.asarray(t, dtype=float)
    if np.any(s < 0) or np.any(s >= t):
        raise ValueError("need 0 <= s < t")
    a = np.asarray(x) + lvl.nu * s - lvl.l
    b = np.asarray(y) + lvl.nu * t - lvl.l
    return np.maximum(1.0 - np.exp(-2.0 * a * b / (t - s)), 0.0)


def h_pfh_lnu(s, t, x, y, lvl: DriftLevel) -> np.ndarray:
    """exp(-2 (x + nu s - l)(y + nu t - l)/(t - s)); the two-parameter family of
    past-future harmonic functions behind sigma_pf."""
    s, t = np.asarray(s, dtype=float), np.asarray(t, dtype=float)
    if np.any(s >= t):
        raise ValueError("need s < t")
    a = np.asarray(x) + lvl.nu * s - lvl.l
    b = np.asarray(y) + lvl.nu * t - lvl.l
    return np.exp(-2.0 * a * b / (t - s))


def h_pfh_harness(s, t, x, y, a: float) -> np.ndarray:
    """exp(a (y-x)/(t-s) - a^2 / (2(t-s))): the slope (harness) family."""
    s, t = np.asarray(s, dtype=float), np.asarray(t, dtype=float)
    if np.any(s >= t):
        raise ValueError("need s < t")
    tau = t - s
    return np.exp(a * (np.asarray(y) - np.asarray(x)) / tau - a**2 / (2.0 * tau))


def e_st(s, t, x, y, dim: int = 1) -> np.ndarray:
    """exp(-2 x.y/(t-s)).

    For dim == 1 the product is elementwise; for dim > 1 the last axis of x
    and y is treated as the space dimension and contracted.
    """
    s, t = np.asarray(s, dtype=float), np.asarray(t, dtype=float)
    if np.any(s >= t):
        raise ValueError("need s < t")
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if dim == 1:
        dot = x * y
    else:
        if x.shape[-1] != dim or y.shape[-1] != dim:
            raise ValueError("last axis of x and y must carry the space dimension")
        dot = np.sum(x * y, axis=-1)
    return np.exp(-2.0 * dot / (t - s))
