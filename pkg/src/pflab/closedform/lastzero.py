"""The law of the last visit to a level by Brownian motion with drift, over a
finite horizon, and the conditional law of the exponential martingale given
that last-visit time."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate
from scipy.special import ndtr

from .gbm import first_passage_prob_drift

__all__ = ["SubProbabilityLaw", "g0_law", "phi_psi", "g_nu_law", "conditional_given_g"]

_QUAD_TOL = 1e-9


@dataclass(frozen=True)
class SubProbabilityLaw:
    """A density g(u) / (pi sqrt(u (horizon - u))) on (0, horizon) plus an
    atom at zero, summing to one.

    The arcsine kernel is kept factored out: every quadrature runs in the
    variable u = horizon * sin(theta)^2, where the kernel cancels exactly and
    only the smooth factor g remains.
    """

    smooth: Callable[[np.ndarray], np.ndarray]
    atom_at_zero: float
    horizon: float

    def density(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        return self.smooth(u) / (np.pi * np.sqrt(u * (self.horizon - u)))

    def integral(self) -> float:
        """Total mass of the continuous part: (2/pi) int_0^{pi/2} g(u(theta))."""
        t = self.horizon
        val, _ = integrate.quad(
            lambda theta: self.smooth(t * np.sin(theta) ** 2),
            0.0,
            np.pi / 2,
            epsabs=_QUAD_TOL,
            limit=200,
        )
        return float(2.0 / np.pi * val)

    def normalization_defect(self) -> float:
        return abs(self.atom_at_zero + self.integral() - 1.0)

    def conditional_cdf_grid(self, n: int = 4096) -> tuple[np.ndarray, np.ndarray]:
        """(u, F(u)) grid of the CDF conditioned on a positive value."""
        theta = np.linspace(0.0, np.pi / 2, n + 1)
        u = self.horizon * np.sin(theta) ** 2
        vals = self.smooth(u)
        cum = integrate.cumulative_trapezoid(vals, theta, initial=0.0)
        return u, cum / cum[-1]


def g0_law(x: float, t: float) -> SubProbabilityLaw:
    """Law of the last visit to level x before t for driftless Brownian motion.

    Density exp(-x^2/(2u)) / (pi sqrt(u(t-u))) on (0, t) — the arcsine law
    damped by the probability of having reached the level — with atom
    P(|N| <= |x|/sqrt(t)) at zero (the level was never reached).
    """
    if t <= 0:
        raise ValueError("horizon must be positive")

    def smooth(u):
        u = np.asarray(u, dtype=float)
        if x == 0:
            return np.ones_like(u)
        with np.errstate(divide="ignore"):
            return np.exp(-(x**2) / (2.0 * u))

    atom = float(2.0 * ndtr(abs(x) / np.sqrt(t)) - 1.0)
    return SubProbabilityLaw(smooth, atom, t)


def phi_psi(lam) -> np.ndarray:
    """E[cosh(lam sqrt(2 e))] for a standard exponential e.

    Integration by parts gives
        1 + (|lam|/2) exp(lam^2/2) sqrt(2 pi) P(|N| <= |lam|);
    the 1/2 is forced by the defining integral (cross-checked against direct
    quadrature of int_0^inf e^{-s} cosh(lam sqrt(2 s)) ds) and by the
    normalization of the drifted last-visit law built on top of it.
    """
    lam = np.abs(np.asarray(lam, dtype=float))
    return 1.0 + 0.5 * np.exp(lam**2 / 2.0) * lam * np.sqrt(2.0 * np.pi) * (2.0 * ndtr(lam) - 1.0)


def g_nu_law(x: float, nu: float, t: float) -> SubProbabilityLaw:
    """Law of the last visit to x before t for Brownian motion with drift nu.

    The drift tilts the driftless density by exp(nu x - nu^2 t / 2) *
    phi(nu sqrt(t - u)); the prefactor is kept inside the returned density so
    that atom + integral = 1 is a checkable invariant.  The atom is the
    drifted no-hit probability 1 - P(T_x <= t).
    """
    if t <= 0:
        raise ValueError("horizon must be positive")
    pref = np.exp(nu * x - nu**2 * t / 2.0)

    def smooth(u):
        u = np.asarray(u, dtype=float)
        if x == 0:
            base = np.ones_like(u)
        else:
            with np.errstate(divide="ignore"):
                base = np.exp(-(x**2) / (2.0 * u))
        return pref * base * phi_psi(nu * np.sqrt(np.maximum(t - u, 0.0)))

    atom = float(1.0 - first_passage_prob_drift(x, nu, t))
    return SubProbabilityLaw(smooth, atom, t)


def conditional_given_g(lam: float, f: Callable[[np.ndarray], np.ndarray]) -> float:
    """E[f(E_t) | last zero of the driftless part at g], with lam = sqrt(t - g).

    Both integrals run over the signed magnitude mu with weight
    |mu| exp(-mu^2/2 - lam mu / 2) / 2; the numerator carries f(exp(lam mu)).
    """
    if lam < 0:
        raise ValueError("lam = sqrt(t - g) must be non-negative")
    if lam == 0.0:
        return float(f(np.asarray(1.0)))

    def weight(mu):
        return 0.5 * np.abs(mu) * np.exp(-(mu**2) / 2.0 - lam * mu / 2.0)

    def num(mu):
        return weight(mu) * f(np.exp(lam * mu))

    # split at the |mu| kink; infinite tails are Gaussian-dominated unless f
    # grows super-exponentially, in which case quad reports a large error
    n_neg, e_neg = integrate.quad(num, -np.inf, 0.0, epsabs=_QUAD_TOL, limit=400)
    n_pos, e_pos = integrate.quad(num, 0.0, np.inf, epsabs=_QUAD_TOL, limit=400)
    d_neg, _ = integrate.quad(weight, -np.inf, 0.0, epsabs=_QUAD_TOL, limit=400)
    d_pos, _ = integrate.quad(weight, 0.0, np.inf, epsabs=_QUAD_TOL, limit=400)
    numerator, denominator = n_neg + n_pos, d_neg + d_pos
    if not np.isfinite(numerator) or (e_neg + e_pos) > 1e-5 * max(abs(numerator), 1.0):
        raise ArithmeticError("quadrature failed; integrand may not be integrable")
    return float(numerator / denominator)
