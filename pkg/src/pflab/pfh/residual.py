"""Residuals of the past-future harmonic PDE pair.

h(s,t;B_s,B_t) is a past-future martingale iff both residuals vanish:

    minus:  h_s + (y - x)/(t - s) h_x + h_xx / 2 = 0
    plus:  -h_t - (y - x)/(t - s) h_y + h_yy / 2 = 0

Exact partials are used when the candidate carries them, otherwise central
finite differences with a relative step.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .candidates import PFCandidate

__all__ = ["ResidualReport", "residual_minus", "residual_plus", "residual_report", "sample_residual_box"]

# balances truncation against round-off for exp-scale candidates
_REL_STEP = 1e-4


def _step(coord: np.ndarray, rel: float) -> np.ndarray:
    return rel * np.maximum(1.0, np.abs(coord))


def _fd_partials_plain(cand: PFCandidate, s, t, x, y, rel: float):
    ds, dt_, dx, dy = _step(s, rel), _step(t, rel), _step(x, rel), _step(y, rel)
    f = cand.h
    hs_ = (f(s + ds, t, x, y) - f(s - ds, t, x, y)) / (2 * ds)
    ht_ = (f(s, t + dt_, x, y) - f(s, t - dt_, x, y)) / (2 * dt_)
    hx_ = (f(s, t, x + dx, y) - f(s, t, x - dx, y)) / (2 * dx)
    hy_ = (f(s, t, x, y + dy) - f(s, t, x, y - dy)) / (2 * dy)
    mid = f(s, t, x, y)
    hxx_ = (f(s, t, x + dx, y) - 2 * mid + f(s, t, x - dx, y)) / dx**2
    hyy_ = (f(s, t, x, y + dy) - 2 * mid + f(s, t, x, y - dy)) / dy**2
    return hs_, ht_, hx_, hy_, hxx_, hyy_


def _fd_partials(cand: PFCandidate, s, t, x, y, rel: float, refine: bool):
    coarse = _fd_partials_plain(cand, s, t, x, y, rel)
    if not refine:
        return coarse
    # one Richardson level: central differences are O(step^2), so the
    # half-step combination (4 fine - coarse)/3 cancels the leading term
    fine = _fd_partials_plain(cand, s, t, x, y, rel / 2.0)
    return tuple((4.0 * f_ - c_) / 3.0 for f_, c_ in zip(fine, coarse))


def _partials(cand: PFCandidate, s, t, x, y, rel: float, refine: bool):
    if cand.exact_partials is not None:
        p = cand.exact_partials
        return (
            p["s"](s, t, x, y),
            p["t"](s, t, x, y),
            p["x"](s, t, x, y),
            p["y"](s, t, x, y),
            p["xx"](s, t, x, y),
            p["yy"](s, t, x, y),
        )
    return _fd_partials(cand, s, t, x, y, rel, refine)


def residual_minus(cand: PFCandidate, s, t, x, y, rel_step: float = _REL_STEP, refine: bool = True) -> np.ndarray:
    s, t, x, y = (np.asarray(v, float) for v in (s, t, x, y))
    if np.any(s >= t):
        raise ValueError("need s < t")
    hs_, _, hx_, _, hxx_, _ = _partials(cand, s, t, x, y, rel_step, refine)
    return hs_ + (y - x) / (t - s) * hx_ + 0.5 * hxx_


def residual_plus(cand: PFCandidate, s, t, x, y, rel_step: float = _REL_STEP, refine: bool = True) -> np.ndarray:
    s, t, x, y = (np.asarray(v, float) for v in (s, t, x, y))
    if np.any(s >= t):
        raise ValueError("need s < t")
    _, ht_, _, hy_, _, hyy_ = _partials(cand, s, t, x, y, rel_step, refine)
    return -ht_ - (y - x) / (t - s) * hy_ + 0.5 * hyy_


@dataclass(frozen=True)
class ResidualReport:
    max_abs_minus: float
    max_abs_plus: float
    points_checked: int
    step: Optional[float] = None  # None when exact partials were used

    @property
    def max_abs(self) -> float:
        return max(self.max_abs_minus, self.max_abs_plus)


def sample_residual_box(
    rng,
    n: int,
    s_range=(0.1, 2.0),
    tau_range=(1.0, 2.5),
    xy_bound: float = 1.0,
    exponent_bound: float = 2.0,
    exponent=None,
):
    """Random (s, t, x, y) points with t - s bounded away from 0 and, when an
    *exponent* function is supplied, |exponent| capped so the candidate stays
    O(1) (residual tolerances are absolute; exp-scale blowup would swamp them).
    """
    g = rng.generator
    out = []
    need = n
    while need > 0:
        m = max(2 * need, 64)
        s = g.uniform(*s_range, m)
        t = s + g.uniform(*tau_range, m)
        x = g.uniform(-xy_bound, xy_bound, m)
        y = g.uniform(-xy_bound, xy_bound, m)
        if exponent is not None:
            keep = np.abs(exponent(s, t, x, y)) <= exponent_bound
            s, t, x, y = s[keep], t[keep], x[keep], y[keep]
        take = min(need, s.size)
        out.append(np.stack([s[:take], t[:take], x[:take], y[:take]], axis=0))
        need -= take
    s, t, x, y = np.concatenate(out, axis=1)
    return s, t, x, y


def residual_report(cand: PFCandidate, s, t, x, y, rel_step: float = _REL_STEP, refine: bool = True) -> ResidualReport:
    rm = residual_minus(cand, s, t, x, y, rel_step, refine)
    rp = residual_plus(cand, s, t, x, y, rel_step, refine)
    return ResidualReport(
        max_abs_minus=float(np.max(np.abs(rm))),
        max_abs_plus=float(np.max(np.abs(rp))),
        points_checked=int(np.size(rm)),
        step=None if cand.exact_partials is not None else rel_step,
    )
