"""Black-Scholes-type identities for the exponential martingale
E_t = exp(B_t - t/2) and the Laplace transforms of last-passage times."""

from __future__ import annotations

import numpy as np
from scipy import integrate
from scipy.special import ndtr

__all__ = [
    "bs_call_gbm",
    "bs_put_gbm",
    "first_passage_prob_drift",
    "first_passage_density_drift",
    "last_passage_cdf_G",
    "expected_local_time_gbm",
    "laplace_gK_killed_bm",
    "laplace_gK_inv_bes3",
    "cameron_martin_atom",
]

_QUAD_TOL = 1e-10


def _d12(t: float, K: float) -> tuple[float, float]:
    d1 = (-np.log(K) + t / 2.0) / np.sqrt(t)
    return d1, d1 - np.sqrt(t)


def bs_call_gbm(t: float, K: float) -> float:
    """E[(E_t - K)^+] for unit volatility, zero rate, spot 1."""
    if t <= 0 or K <= 0:
        raise ValueError("need t > 0 and K > 0")
    d1, d2 = _d12(t, K)
    return float(ndtr(d1) - K * ndtr(d2))


def bs_put_gbm(t: float, K: float) -> float:
    """E[(K - E_t)^+]; call/put parity holds since E[E_t] = 1."""
    if t <= 0 or K <= 0:
        raise ValueError("need t > 0 and K > 0")
    d1, d2 = _d12(t, K)
    return float(K * ndtr(-d2) - ndtr(-d1))


def first_passage_prob_drift(a: float, nu: float, t: float) -> float:
    """P(T_a <= t) for Brownian motion with drift nu hitting level a != 0.

    Standard reflection/Girsanov form; by symmetry the a < 0 case maps to
    (-a, -nu).  Returns 1 - P(never hit by t); the total mass over t = inf is
    min(1, exp(2 nu a)) by Cameron-Martin.
    """
    if t <= 0:
        raise ValueError("horizon must be positive")
    if a == 0:
        return 1.0
    if a < 0:
        a, nu = -a, -nu
    rt = np.sqrt(t)
    return float(ndtr((nu * t - a) / rt) + np.exp(2.0 * nu * a) * ndtr((-a - nu * t) / rt))


def first_passage_density_drift(a: float, nu: float, tau) -> np.ndarray:
    """(Defective) density of T_a for drift nu: |a| exp(-(a - nu t)^2/(2t)) / sqrt(2 pi t^3)."""
    tau = np.asarray(tau, dtype=float)
    out = np.zeros_like(tau)
    pos = tau > 0
    tp = tau[pos]
    out[pos] = np.abs(a) / np.sqrt(2.0 * np.pi * tp**3) * np.exp(-((a - nu * tp) ** 2) / (2.0 * tp))
    return out


def last_passage_cdf_G(t: float, K: float) -> float:
    """P(G <= t) for G the last visit of B_s + s/2 to ln K.

    Computed from the strong-Markov decomposition G = T_a + N^2/nu^2 with
    nu = 1/2 and a = ln K: convolution of the (defective) first-passage
    density with the hitting-from-the-level tail, plus the never-hit mass.
    Agrees with the Black-Scholes call value bs_call_gbm(t, K).
    """
    if t <= 0 or K <= 0:
        raise ValueError("need t > 0 and K > 0")
    nu = 0.5
    a = float(np.log(K))
    if a == 0.0:
        return float(2.0 * ndtr(nu * np.sqrt(t)) - 1.0)
    never_hit = 1.0 - min(1.0, np.exp(2.0 * nu * a))

    def integrand(tau):
        tail = 2.0 * ndtr(nu * np.sqrt(t - tau)) - 1.0
        return first_passage_density_drift(a, nu, np.asarray([tau]))[0] * tail

    val, _ = integrate.quad(integrand, 0.0, t, epsabs=_QUAD_TOL, limit=300, points=[0.0, t])
    return float(never_hit + val)


def expected_local_time_gbm(K: float, t: float) -> float:
    """E[L_t^K(E)] = 2 sqrt(K) E[1_{4 N^2 <= t} exp(-(ln K)^2 / (8 N^2))].

    Satisfies the occupation identity E[(K - E_t)^+] = (K - 1)^+ + L/2 (and
    the call analogue with (1 - K)^+), which ties it to the put price.
    """
    if t <= 0 or K <= 0:
        raise ValueError("need t > 0 and K > 0")
    lk2 = np.log(K) ** 2

    def integrand(n):
        return np.exp(-(n**2) / 2.0 - lk2 / (8.0 * n**2))

    hi = np.sqrt(t) / 2.0
    val, _ = integrate.quad(integrand, 0.0, hi, epsabs=_QUAD_TOL, limit=300)
    return float(2.0 * np.sqrt(K) * 2.0 / np.sqrt(2.0 * np.pi) * val)


def laplace_gK_killed_bm(lam: float, K: float) -> float:
    """E[exp(-lam^2 G_K / 2)] for Brownian motion from 1 killed at 0,
    G_K the last visit to K in (0, 1): (e^{-lam(1-K)} - e^{-lam(1+K)}) / (2 lam K).

    Equivalently G_K has the law U^2 / N^2 with U uniform on [1-K, 1+K].
    """
    if lam <= 0:
        raise ValueError("need lam > 0")
    if not 0 < K < 1:
        raise ValueError("killed-BM case needs 0 < K < 1")
    return float((np.exp(-lam * (1 - K)) - np.exp(-lam * (1 + K))) / (2.0 * lam * K))


def laplace_gK_inv_bes3(lam: float, K: float) -> float:
    """E[exp(-lam^2 G_K / 2)] for the reciprocal BES(3) from 1, G_K the last
    visit to K: (e^{-lam(1/K - 1)} - e^{-lam(1/K + 1)}) / (2 lam).

    Only 0 < K <= 1 is supported: the underlying derivation integrates over
    [1/K - 1, 1/K + 1], which must sit in the positive half-line.
    """
    if lam <= 0:
        raise ValueError("need lam > 0")
    if not 0 < K <= 1:
        raise ValueError("reciprocal-BES(3) case supports 0 < K <= 1 only")
    return float((np.exp(-lam * (1.0 / K - 1)) - np.exp(-lam * (1.0 / K + 1))) / (2.0 * lam))


def cameron_martin_atom(a: float, nu: float) -> float:
    """P(the drift -nu path ever reaches a > 0) = exp(-2 nu a)."""
    if a <= 0 or nu <= 0:
        raise ValueError("need a > 0 and nu > 0")
    return float(np.exp(-2.0 * nu * a))
