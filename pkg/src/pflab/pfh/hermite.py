"""Hermite coefficient machinery for the two-parameter generating family.

The classical polynomials here follow the probabilists' space-time
normalization exp(lam x - lam^2 u / 2) = sum_n lam^n / n! H_n(x, u), computed
with the stable three-term recurrence H_{n+1} = x H_n - n u H_{n-1}.

Expanding exp(-2 (x + nu s - l)(y + nu t - l)/(t - s)) in powers of the level
l and the drift nu yields coefficients H_{p,q}(s,t;x,y); each one is itself a
past-future harmonic function.
"""

from __future__ import annotations

import math

import numpy as np

from ..closedform.bridge import e_st

__all__ = ["hermite_h", "hermite_5var", "pf_hermite_coeff", "lnu_generating_args"]


def hermite_h(n: int, x, u) -> np.ndarray:
    """H_n(x, u) from the recurrence H_0 = 1, H_1 = x, H_{n+1} = x H_n - n u H_{n-1}."""
    if n < 0:
        raise ValueError("order must be non-negative")
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    h_prev = np.ones(np.broadcast(x, u).shape)
    if n == 0:
        return h_prev
    h_cur = x * np.ones_like(h_prev)
    for k in range(1, n):
        h_cur, h_prev = x * h_cur - k * u * h_prev, h_cur
    return h_cur


def hermite_5var(p: int, q: int, a, b, c, d, f) -> np.ndarray:
    """Coefficient of l^p nu^q in exp(a l + b nu - c nu^2/2 - d l^2/2 + f l nu).

    Equals sum over m <= min(p, q) of
        f^m / m! * H_{p-m}(a, d) H_{q-m}(b, c) / ((p-m)! (q-m)!).

    The f^m / m! factor is forced by the generating-function identity (match
    coefficients of (l nu)^m in exp(f l nu)).
    """
    if p < 0 or q < 0:
        raise ValueError("orders must be non-negative")
    f = np.asarray(f, dtype=float)
    total = 0.0
    for m in range(0, min(p, q) + 1):
        term = (
            f**m
            / math.factorial(m)
            * hermite_h(p - m, a, d)
            * hermite_h(q - m, b, c)
            / (math.factorial(p - m) * math.factorial(q - m))
        )
        total = total + term
    return total


def lnu_generating_args(s, t, x, y) -> tuple:
    """The five arguments (a, b, c, d, f) such that the exponent of the
    two-parameter family is -2xy/(t-s) + a l + b nu - c nu^2/2 - d l^2/2 + f l nu."""
    s, t = np.asarray(s, float), np.asarray(t, float)
    tau = t - s
    a = 2.0 * (x + y) / tau
    b = -2.0 * (s * y + t * x) / tau
    c = 4.0 * s * t / tau
    d = 4.0 / tau
    f = 2.0 * (s + t) / tau
    return a, b, c, d, f


def pf_hermite_coeff(p: int, q: int, s, t, x, y) -> np.ndarray:
    """H_{p,q}(s,t;x,y): coefficient of l^p nu^q in the two-parameter family.

    The exp(-2xy/(t-s)) prefactor (the l = nu = 0 value) multiplies the
    five-variable Hermite coefficient; without it the p = q = 0 case would
    not reduce to the cross-exponential, breaking the generating identity.
    """
    s, t = np.asarray(s, float), np.asarray(t, float)
    if np.any(s >= t):
        raise ValueError("need s < t")
    a, b, c, d, f = lnu_generating_args(s, t, x, y)
    return e_st(s, t, x, y) * hermite_5var(p, q, a, b, c, d, f)
