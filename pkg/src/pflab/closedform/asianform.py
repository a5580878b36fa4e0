"""Moments of the normalized running average of the exponential martingale."""

from __future__ import annotations

import math

import numpy as np

__all__ = ["asian_a1", "asian_a2", "asian_laplace_atilde", "c_quadratic"]


def asian_a1() -> float:
    """First moment of (1/t) int_0^t E_s ds: identically 1."""
    return 1.0


def asian_a2(t: float) -> float:
    """Second moment: (2/t^2) (e^t - 1 - t)."""
    if t <= 0:
        raise ValueError("need t > 0")
    return float(2.0 / t**2 * (math.expm1(t) - t))


def asian_laplace_atilde(alpha: float, n: int) -> float:
    """int_0^inf e^{-alpha t} E[(int_0^t E_s ds)^n] dt
    = n! / (alpha^2 (alpha - 1)(alpha - 3) ... (alpha - n(n-1)/2)).

    Requires alpha > n(n-1)/2 so every factor stays positive.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    if alpha <= n * (n - 1) / 2.0:
        raise ValueError("need alpha > n(n-1)/2 for convergence")
    denom = alpha**2
    for k in range(2, n + 1):
        denom *= alpha - k * (k - 1) / 2.0
    return float(math.factorial(n) / denom)


def c_quadratic(s: np.ndarray) -> float:
    """Var-minus-mean combination E[(B_{s_1} + ... + B_{s_n})^2] - sum s_k
    = sum_{j=0}^{n-1} (n-j)(n-j-1)(s_{j+1} - s_j), with s_0 = 0.

    Nonnegative, and zero iff n <= 1 or all gaps up to index n-2 vanish.
    """
    s = np.asarray(s, dtype=float)
    if s.ndim != 1 or s.size < 1:
        raise ValueError("need an ordered vector of times")
    if s[0] < 0 or np.any(np.diff(s) < 0):
        raise ValueError("times must satisfy 0 <= s_1 <= ... <= s_n")
    n = s.size
    gaps = np.diff(np.concatenate([[0.0], s]))
    j = np.arange(n)
    coeff = (n - j) * (n - j - 1)
    return float(np.sum(coeff * gaps))
