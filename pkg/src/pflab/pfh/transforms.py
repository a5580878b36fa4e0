"""Stability transforms of the past-future harmonic class.

Each transform maps a PFH candidate to another PFH candidate:

    time inversion   h^(s,t;x,y) = h(1/t, 1/s; y/t, x/s)   (involutive)
    drift/level shift f(s,t;x,y) = h(s,t; x + nu s + l, y + nu t + l)
    Brownian scaling  f(s,t;x,y) = h(a^2 s, a^2 t; a x, a y)
    space reflection  f(s,t;x,y) = h(s,t; -x, -y)

plus the embedding of a space-time harmonic phi(u, z) (phi_u + phi_zz/2 = 0)
as phi(1/(t-s), (y-x)/(t-s)).

Transformed candidates drop exact partials and fall back to finite
differences in the residual checks.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .candidates import PFCandidate

__all__ = [
    "transform_time_inversion",
    "transform_drift_shift",
    "transform_scale",
    "transform_reflect",
    "from_spacetime_harmonic",
]


def transform_time_inversion(cand: PFCandidate) -> PFCandidate:
    """h -> h(1/t, 1/s; y/t, x/s); requires 0 < s < t."""

    def h(s, t, x, y):
        return cand.h(1.0 / t, 1.0 / s, y / t, x / s)

    def domain(s, t, x, y):
        s, t = np.asarray(s, float), np.asarray(t, float)
        inner_ok = np.asarray(cand.in_domain(1.0 / t, 1.0 / s, y / t, x / s), bool)
        return (s > 0) & inner_ok

    return PFCandidate(h=h, domain=domain, name=f"hat({cand.name})")


def transform_drift_shift(cand: PFCandidate, nu: float, l: float) -> PFCandidate:
    def h(s, t, x, y):
        return cand.h(s, t, x + nu * s + l, y + nu * t + l)

    def domain(s, t, x, y):
        return cand.in_domain(s, t, x + nu * s + l, y + nu * t + l)

    return PFCandidate(h=h, domain=domain, name=f"shift({cand.name}, nu={nu}, l={l})")


def transform_scale(cand: PFCandidate, a: float) -> PFCandidate:
    if a <= 0:
        raise ValueError("scaling factor must be positive")

    def h(s, t, x, y):
        return cand.h(a**2 * s, a**2 * t, a * x, a * y)

    def domain(s, t, x, y):
        return cand.in_domain(a**2 * s, a**2 * t, a * x, a * y)

    return PFCandidate(h=h, domain=domain, name=f"scale({cand.name}, a={a})")


def transform_reflect(cand: PFCandidate) -> PFCandidate:
    """h -> h(s, t; -x, -y); PFH is preserved since -B is a Brownian motion."""

    def h(s, t, x, y):
        return cand.h(s, t, -x, -y)

    def domain(s, t, x, y):
        return cand.in_domain(s, t, -x, -y)

    return PFCandidate(h=h, domain=domain, name=f"reflect({cand.name})")


def from_spacetime_harmonic(phi: Callable[[np.ndarray, np.ndarray], np.ndarray], name: str = "phi") -> PFCandidate:
    """phi(u, z) space-time harmonic -> phi(1/(t-s), (y-x)/(t-s)) is PFH."""

    def h(s, t, x, y):
        tau = t - s
        return phi(1.0 / tau, (y - x) / tau)

    return PFCandidate(h=h, name=f"pf({name})")
