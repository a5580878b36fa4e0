"""Candidate four-argument functions h(s, t; x, y) with optional exact partials.

A candidate is *past-future harmonic* when h(s, t; B_s, B_t) is a martingale
for the filtration generated by the path before s and after t; the defining
PDE pair is checked by :mod:`pflab.pfh.residual`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ..closedform.bridge import DriftLevel

__all__ = ["PFCandidate", "lnu_candidate", "harness_candidate", "exp_cross_candidate"]

FourArg = Callable[[np.ndarray, np.ndarray, np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class PFCandidate:
    """A function h(s,t;x,y), an optional domain predicate and, when available,
    exact partial derivatives keyed 's','t','x','y','xx','yy'."""

    h: FourArg
    exact_partials: Optional[dict] = None
    domain: Optional[FourArg] = None
    name: str = "candidate"

    def __call__(self, s, t, x, y) -> np.ndarray:
        return self.h(np.asarray(s, float), np.asarray(t, float), np.asarray(x, float), np.asarray(y, float))

    def in_domain(self, s, t, x, y) -> np.ndarray:
        base = np.asarray(s, float) < np.asarray(t, float)
        if self.domain is None:
            return base
        return base & np.asarray(self.domain(s, t, x, y), bool)

    def partial(self, key: str, s, t, x, y) -> np.ndarray:
        if self.exact_partials is None or key not in self.exact_partials:
            raise KeyError(f"no exact partial {key!r} for {self.name}")
        return self.exact_partials[key](s, t, x, y)


def _exp_family(g, grads, name):
    """Candidate exp(g) with partials assembled from the gradient of g.

    For h = exp(g) with g quadratic-free in each space variable (g_xx = 0),
    h_x = h g_x and h_xx = h g_x^2, which keeps the exact residuals at
    rounding level even where h is large.
    """
    h = lambda s, t, x, y: np.exp(g(s, t, x, y))
    partials = {
        "s": lambda s, t, x, y: h(s, t, x, y) * grads["s"](s, t, x, y),
        "t": lambda s, t, x, y: h(s, t, x, y) * grads["t"](s, t, x, y),
        "x": lambda s, t, x, y: h(s, t, x, y) * grads["x"](s, t, x, y),
        "y": lambda s, t, x, y: h(s, t, x, y) * grads["y"](s, t, x, y),
        "xx": lambda s, t, x, y: h(s, t, x, y) * grads["x"](s, t, x, y) ** 2,
        "yy": lambda s, t, x, y: h(s, t, x, y) * grads["y"](s, t, x, y) ** 2,
    }
    return PFCandidate(h=h, exact_partials=partials, name=name)


def lnu_candidate(lvl: DriftLevel) -> PFCandidate:
    """exp(-2 (x + nu s - l)(y + nu t - l)/(t - s)) with exact partials."""
    nu, l = lvl.nu, lvl.l

    def g(s, t, x, y):
        return -2.0 * (x + nu * s - l) * (y + nu * t - l) / (t - s)

    def a(s, t, x, y):
        return x + nu * s - l

    def b(s, t, x, y):
        return y + nu * t - l

    grads = {
        "x": lambda s, t, x, y: -2.0 * b(s, t, x, y) / (t - s),
        "y": lambda s, t, x, y: -2.0 * a(s, t, x, y) / (t - s),
        "s": lambda s, t, x, y: -2.0 * nu * b(s, t, x, y) / (t - s)
        - 2.0 * a(s, t, x, y) * b(s, t, x, y) / (t - s) ** 2,
        "t": lambda s, t, x, y: -2.0 * nu * a(s, t, x, y) / (t - s)
        + 2.0 * a(s, t, x, y) * b(s, t, x, y) / (t - s) ** 2,
    }
    return _exp_family(g, grads, name=f"h_lnu(l={l}, nu={nu})")


def harness_candidate(a: float) -> PFCandidate:
    """exp(a (y - x)/(t - s) - a^2/(2 (t - s))) with exact partials."""

    def g(s, t, x, y):
        tau = t - s
        return a * (y - x) / tau - a**2 / (2.0 * tau)

    grads = {
        "x": lambda s, t, x, y: -a / (t - s) + 0.0 * x,
        "y": lambda s, t, x, y: a / (t - s) + 0.0 * y,
        "s": lambda s, t, x, y: (a * (y - x) - a**2 / 2.0) / (t - s) ** 2,
        "t": lambda s, t, x, y: -(a * (y - x) - a**2 / 2.0) / (t - s) ** 2,
    }
    return _exp_family(g, grads, name=f"harness(a={a})")


def exp_cross_candidate() -> PFCandidate:
    """exp(-2 x y / (t - s)): the level-zero, drift-zero member of the family."""
    return lnu_candidate(DriftLevel(0.0, 0.0))
