"""Monte Carlo estimates, empirical distributions and goodness-of-fit."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special, stats

__all__ = [
    "McEstimate",
    "EmpiricalDistribution",
    "ks_statistic",
    "ks_two_sample",
    "rank_correlation",
]


@dataclass(frozen=True)
class McEstimate:
    """Mean, standard error and sample count of a Monte Carlo average."""

    mean: float
    std_error: float
    n: int

    def __post_init__(self):
        if self.n <= 0:
            raise ValueError("sample count must be positive")
        if self.std_error < 0:
            raise ValueError("standard error cannot be negative")

    @classmethod
    def from_samples(cls, samples: np.ndarray) -> "McEstimate":
        x = np.asarray(samples, dtype=float).ravel()
        n = x.size
        se = float(x.std(ddof=1) / np.sqrt(n)) if n > 1 else 0.0
        return cls(float(x.mean()), se, n)

    def z_score(self, reference: float) -> float:
        """Standardized distance from *reference*; inf when the error is 0."""
        if self.std_error == 0.0:
            return 0.0 if self.mean == reference else float("inf")
        return (self.mean - reference) / self.std_error

    def merge(self, other: "McEstimate") -> "McEstimate":
        """Pooled estimate of two disjoint sample batches (associative)."""
        n = self.n + other.n
        mean = (self.n * self.mean + other.n * other.mean) / n
        # recover sums of squares from the per-batch standard errors
        ss_self = (self.std_error**2) * self.n * max(self.n - 1, 1)
        ss_other = (other.std_error**2) * other.n * max(other.n - 1, 1)
        delta = other.mean - self.mean
        ss = ss_self + ss_other + delta**2 * self.n * other.n / n
        se = np.sqrt(ss / max(n - 1, 1) / n)
        return McEstimate(float(mean), float(se), n)


@dataclass(frozen=True)
class EmpiricalDistribution:
    """Sorted sample set with CDF evaluation and KS distance."""

    sorted_samples: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.sorted_samples, dtype=float).ravel()
        object.__setattr__(self, "sorted_samples", x)
        if x.size == 0:
            raise ValueError("empty sample set")
        if np.any(np.diff(x) < 0):
            raise ValueError("samples must be sorted ascending")

    @classmethod
    def from_samples(cls, samples: np.ndarray) -> "EmpiricalDistribution":
        return cls(np.sort(np.asarray(samples, dtype=float).ravel()))

    @property
    def n(self) -> int:
        return self.sorted_samples.size

    def cdf(self, x) -> np.ndarray:
        return np.searchsorted(self.sorted_samples, np.asarray(x), side="right") / self.n

    def ks_distance(self, cdf: Callable[[np.ndarray], np.ndarray]) -> float:
        f = np.asarray(cdf(self.sorted_samples), dtype=float)
        i = np.arange(1, self.n + 1)
        d_plus = np.max(i / self.n - f)
        d_minus = np.max(f - (i - 1) / self.n)
        return float(max(d_plus, d_minus))


def ks_statistic(emp: EmpiricalDistribution, cdf: Callable[[np.ndarray], np.ndarray]) -> tuple[float, float]:
    """Two-sided one-sample Kolmogorov-Smirnov statistic and p-value.

    The p-value uses the asymptotic Kolmogorov distribution, adequate for the
    sample sizes used here (>= 10); exact small-n tables are out of scope.
    """
    if emp.n < 10:
        raise ValueError("need at least 10 samples for the KS test")
    f = np.asarray(cdf(emp.sorted_samples), dtype=float)
    if np.any(f < -1e-12) or np.any(f > 1 + 1e-12):
        raise ValueError("cdf values must lie in [0, 1]")
    if np.any(np.diff(f) < -1e-12):
        raise ValueError("cdf must be monotone on the sample range")
    d = emp.ks_distance(cdf)
    p = float(special.kolmogorov(np.sqrt(emp.n) * d))
    return d, p


def ks_two_sample(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Two-sample KS statistic and asymptotic p-value."""
    res = stats.ks_2samp(np.asarray(x).ravel(), np.asarray(y).ravel(), mode="asymp")
    return float(res.statistic), float(res.pvalue)


def rank_correlation(x: np.ndarray, y: np.ndarray) -> float:
    """Spearman rank correlation; |rho| <~ 3/sqrt(n) indicates independence."""
    rho = stats.spearmanr(np.asarray(x).ravel(), np.asarray(y).ravel()).statistic
    return float(rho)
