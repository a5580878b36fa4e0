"""pflab: a verification lab for last-passage-time laws, past-future
martingales and Black-Scholes-type identities.

Every closed formula is implemented as a pure analytic evaluator
(:mod:`pflab.closedform`) and checked against an independent Monte Carlo or
quadrature oracle (:mod:`pflab.mc`, :mod:`pflab.strictlocal`,
:mod:`pflab.esscher`, :mod:`pflab.asian`) at desk scale.
"""

from .grids import PathSample, TimeGrid
from .report import CheckReport
from .rng import RngStream, spawn_streams
from .stats import EmpiricalDistribution, McEstimate

__all__ = [
    "RngStream",
    "spawn_streams",
    "TimeGrid",
    "PathSample",
    "McEstimate",
    "EmpiricalDistribution",
    "CheckReport",
]

__version__ = "0.1.0"
