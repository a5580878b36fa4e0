"""The call-price defect curve r(t) = E[(1/X_t - 1)^+] of the reciprocal
BES(3) started at 1, in its integral, series and Laplace forms."""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate
from scipy.special import ndtr

__all__ = ["rho_curve", "r_of_t", "r_integral_form", "r_series", "r_laplace", "rtilde_laplace"]


def rho_curve(u) -> np.ndarray:
    """rho(u) = (1 - exp(-2u^2))/(2u) - int_u^{2u} exp(-x^2/2) dx, u > 0.

    r(t) = sqrt(2/pi) * rho(1/sqrt(t)); rises like u^3/6 at 0 and decays like
    1/(2u) at infinity, so the curve has a single interior maximum.
    """
    u = np.asarray(u, dtype=float)
    if np.any(u <= 0):
        raise ValueError("rho is defined for u > 0")
    # int_u^{2u} e^{-x^2/2} dx = sqrt(2 pi) (Phi(2u) - Phi(u))
    mid = np.sqrt(2.0 * np.pi) * (ndtr(2.0 * u) - ndtr(u))
    return np.expm1(-2.0 * u**2) / (-2.0 * u) - mid


def r_of_t(t) -> np.ndarray:
    """r(t) = P(|N| <= 1/sqrt(t)) - P(|N| <= U_{[0,2]}/sqrt(t))."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValueError("r(t) is defined for t > 0")
    return np.sqrt(2.0 / np.pi) * rho_curve(1.0 / np.sqrt(t))


def r_integral_form(t: float) -> float:
    """Direct evaluation of sqrt(2/pi) [ int_0^{1/sqrt t} e^{-x^2/2} dx
    - int_0^inf e^{-x^2/2} (1 - sqrt(t) x / 2)^+ dx ]."""
    if t <= 0:
        raise ValueError("need t > 0")
    rt = math.sqrt(t)
    first = math.sqrt(2.0 * np.pi) * (ndtr(1.0 / rt) - 0.5)

    def second(x):
        return math.exp(-(x**2) / 2.0) * max(1.0 - rt * x / 2.0, 0.0)

    sec, _ = integrate.quad(second, 0.0, 2.0 / rt, epsabs=1e-12, limit=200)
    return math.sqrt(2.0 / np.pi) * (first - sec)


def r_series(t: float, n_terms: int = 6) -> float:
    """Large-t series r(t) = sqrt(2/(pi t)) * sum_n r_n / t^n with
    r_n = (-1)^n / (n! (2n+1)) * (1/2^n - 2^n/(n+1)); r_1 = 1/6, r_2 = -13/120."""
    if t <= 0:
        raise ValueError("need t > 0")
    if n_terms < 1:
        raise ValueError("need at least one term")
    total = 0.0
    for n in range(1, n_terms + 1):
        r_n = (-1.0) ** n / (math.factorial(n) * (2 * n + 1)) * (0.5**n - 2.0**n / (n + 1))
        total += r_n / t**n
    return math.sqrt(2.0 / (np.pi * t)) * total


def r_laplace(lam: float) -> float:
    """int_0^inf lam e^{-lam t} r(t) dt = (1 - e^{-2 sqrt(2 lam)})/(2 sqrt(2 lam))
    - e^{-sqrt(2 lam)}."""
    if lam <= 0:
        raise ValueError("need lam > 0")
    s = math.sqrt(2.0 * lam)
    return float((1.0 - math.exp(-2.0 * s)) / (2.0 * s) - math.exp(-s))


def rtilde_laplace(lam: float) -> float:
    """Laplace transform of the probability density 3 r(t):
    3 (1 - e^{-2 sqrt(2 lam)} - 2 sqrt(2 lam) e^{-sqrt(2 lam)}) / (2 lam)^{3/2}."""
    if lam <= 0:
        raise ValueError("need lam > 0")
    s = math.sqrt(2.0 * lam)
    return float(3.0 * (1.0 - math.exp(-2.0 * s) - 2.0 * s * math.exp(-s)) / s**3)
