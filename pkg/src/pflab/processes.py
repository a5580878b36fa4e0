"""Path simulation: drifted Brownian motion, the Gamma subordinator and
spectrally negative compound-Poisson Levy paths (drift up, jumps down)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grids import PathSample, TimeGrid
from .rng import RngStream

__all__ = [
    "simulate_bm_path",
    "simulate_bm_ensemble",
    "simulate_gamma_process",
    "gamma_increments",
    "LevyModel",
    "simulate_levy_cp_path",
    "sample_levy_jump_epochs",
    "sample_levy_terminal",
]


def simulate_bm_path(rng: RngStream, grid: TimeGrid, drift: float = 0.0) -> PathSample:
    """Brownian motion with drift on the grid, started at 0 at the grid origin.

    Increments over a cell of width dt are Gaussian with mean drift*dt and
    variance dt, independent across cells (exact discretization).
    """
    dt = grid.dt
    incr = drift * dt + np.sqrt(dt) * rng.generator.standard_normal(dt.size)
    values = np.concatenate([[0.0], np.cumsum(incr)])
    return PathSample(grid, values)


def simulate_bm_ensemble(rng: RngStream, grid: TimeGrid, drift: float, n_paths: int) -> np.ndarray:
    """(n_paths, len(grid)) array of drifted Brownian paths started at 0."""
    dt = grid.dt
    incr = drift * dt + np.sqrt(dt) * rng.generator.standard_normal((n_paths, dt.size))
    out = np.empty((n_paths, len(grid)))
    out[:, 0] = 0.0
    np.cumsum(incr, axis=1, out=out[:, 1:])
    return out


def gamma_increments(rng: RngStream, dt: np.ndarray, size=None) -> np.ndarray:
    shape = dt if size is None else np.broadcast_to(dt, tuple(np.atleast_1d(size)) + dt.shape)
    return rng.generator.gamma(shape, 1.0)


def simulate_gamma_process(rng: RngStream, grid: TimeGrid) -> PathSample:
    """Standard Gamma subordinator: independent Gamma(dt, 1) increments."""
    incr = gamma_increments(rng, grid.dt)
    values = np.concatenate([[grid.points[0] * 0.0], np.cumsum(incr)])
    return PathSample(grid, values)


# --------------------------------------------------------------------------
# Spectrally negative compound Poisson + drift
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class LevyModel:
    """X_t = c*t - sum of exponential jumps: no positive jumps by construction.

    Jumps arrive at rate ``jump_rate`` and have Exp(jump_exp_rate) sizes,
    subtracted from the linear drift.  The Laplace exponent is

        psi(lam) = c*lam + rate * (E[exp(-lam J)] - 1),
        E[exp(-lam J)] = theta / (theta + lam),

    finite for all lam > -theta, so the exponential martingale
    exp(X_t - t psi(1)) is a true mean-one martingale.
    """

    drift: float
    jump_rate: float
    jump_exp_rate: float = 1.0

    def __post_init__(self):
        if self.jump_rate < 0:
            raise ValueError("jump rate must be non-negative")
        if self.jump_exp_rate <= 0:
            raise ValueError("exponential jump parameter must be positive")

    def jump_laplace(self, lam: float) -> float:
        """E[exp(-lam J)] for J ~ Exp(theta)."""
        if lam <= -self.jump_exp_rate:
            raise ValueError("Laplace transform diverges for lam <= -theta")
        return self.jump_exp_rate / (self.jump_exp_rate + lam)

    def psi(self, lam: float) -> float:
        """Laplace exponent: (1/t) log E[exp(lam X_t)]... evaluated at -lam on jumps."""
        return self.drift * lam + self.jump_rate * (self.jump_laplace(lam) - 1.0)

    @property
    def mean_jump(self) -> float:
        return 1.0 / self.jump_exp_rate

    def mu_below(self, u) -> np.ndarray:
        """mu((0, u)) for mu the image of the Levy measure under x -> exp(x).

        Jumps of X are -J with J ~ Exp(theta), so the image law sits on (0, 1)
        and mu((0, u)) = rate * P(exp(-J) < u) = rate * u**theta for u in (0, 1].
        """
        u = np.asarray(u, dtype=float)
        out = np.where(u >= 1.0, self.jump_rate, self.jump_rate * np.clip(u, 0.0, 1.0) ** self.jump_exp_rate)
        return out


def sample_levy_jump_epochs(rng: RngStream, model: LevyModel, horizon: float) -> tuple[np.ndarray, np.ndarray]:
    """Exact jump epochs and sizes on [0, horizon]."""
    g = rng.generator
    n = g.poisson(model.jump_rate * horizon)
    times = np.sort(g.random(n) * horizon)
    sizes = g.standard_exponential(n) / model.jump_exp_rate
    return times, sizes


def simulate_levy_cp_path(rng: RngStream, model: LevyModel, grid: TimeGrid) -> PathSample:
    """Exact path of X on the grid: linear drift between jumps, jumps subtracted."""
    t0, t1 = grid.points[0], grid.points[-1]
    times, sizes = sample_levy_jump_epochs(rng, model, t1 - t0)
    cum = np.concatenate([[0.0], np.cumsum(sizes)])
    k = np.searchsorted(times, grid.points - t0, side="right")
    values = model.drift * (grid.points - t0) - cum[k]
    return PathSample(grid, values)


def sample_levy_terminal(rng: RngStream, model: LevyModel, t: float, size: int) -> np.ndarray:
    """Exact X_t marginal: Poisson jump count, Gamma-summed exponential sizes."""
    g = rng.generator
    counts = g.poisson(model.jump_rate * t, size)
    total = g.gamma(np.maximum(counts, 1e-12), 1.0 / model.jump_exp_rate)
    total = np.where(counts == 0, 0.0, total)
    return model.drift * t - total
