"""Time grids and sampled paths."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["TimeGrid", "PathSample", "graded_edges"]


class InvalidGridError(ValueError):
    """Raised for grids that are not strictly increasing or too short."""


@dataclass(frozen=True)
class TimeGrid:
    """Strictly increasing sequence of non-negative times."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        object.__setattr__(self, "points", pts)
        if pts.ndim != 1 or pts.size < 2:
            raise InvalidGridError("grid needs at least two points")
        if pts[0] < 0:
            raise InvalidGridError("grid must start at a non-negative time")
        if not np.all(np.diff(pts) > 0):
            raise InvalidGridError("grid points must be strictly increasing")
        if not np.all(np.isfinite(pts)):
            raise InvalidGridError("grid points must be finite")

    @classmethod
    def uniform(cls, start: float, end: float, n_cells: int) -> "TimeGrid":
        return cls(np.linspace(start, end, n_cells + 1))

    @property
    def dt(self) -> np.ndarray:
        return np.diff(self.points)

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class PathSample:
    """A single simulated path sampled on a grid."""

    grid: TimeGrid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if vals.shape != self.grid.points.shape:
            raise ValueError("values must have the same length as the grid")


def graded_edges(
    t_fine_end: float,
    t_max: float,
    n_fine: int = 512,
    growth: float = 0.005,
    power: float = 1.5,
    dt_min: float | None = None,
) -> np.ndarray:
    """Grid edges that are uniform up to ``t_fine_end`` and then grow like
    ``dt = growth * t**power``.

    Designed for last-passage sampling of variables with a ``t**-power``
    density tail: the cell width then tracks the inverse local density, so the
    in-cell location error contributes a uniformly bounded CDF perturbation.
    """
    if t_fine_end <= 0 or t_max <= t_fine_end:
        raise ValueError("need 0 < t_fine_end < t_max")
    edges = list(np.linspace(0.0, t_fine_end, n_fine + 1))
    t = edges[-1]
    floor = (t_fine_end / n_fine) if dt_min is None else dt_min
    while t < t_max:
        t = t + max(floor, growth * t**power)
        edges.append(min(t, t_max))
    return np.asarray(edges)
