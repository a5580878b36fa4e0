"""The outcome record of a formula-vs-oracle comparison."""

from __future__ import annotations

from dataclasses import dataclass, field

from .stats import McEstimate

__all__ = ["CheckReport"]


@dataclass(frozen=True)
class CheckReport:
    """An analytic value, its Monte Carlo (or quadrature) estimate and the
    standardized distance between them.

    ``passed`` is |z| <= threshold for two-sided checks; one-sided and
    KS-style checks set ``z_score`` to the signed margin they care about and
    document the convention in ``extras``.
    """

    label: str
    analytic: float
    estimate: McEstimate
    z_score: float
    passed: bool
    threshold: float = 3.0
    extras: dict = field(default_factory=dict)

    @classmethod
    def from_estimate(
        cls,
        label: str,
        analytic: float,
        estimate: McEstimate,
        threshold: float = 3.0,
        **extras,
    ) -> "CheckReport":
        z = estimate.z_score(analytic)
        return cls(
            label=label,
            analytic=float(analytic),
            estimate=estimate,
            z_score=float(z),
            passed=bool(abs(z) <= threshold),
            threshold=threshold,
            extras=dict(extras),
        )

    def to_dict(self) -> dict:
        out = {
            "check": self.label,
            "analytic": self.analytic,
            "estimate": self.estimate.mean,
            "std_error": self.estimate.std_error,
            "n": self.estimate.n,
            "z": self.z_score,
            "pass": self.passed,
            "threshold": self.threshold,
        }
        if self.extras:
            out["extras"] = {k: self.extras[k] for k in sorted(self.extras)}
        return out

    def __str__(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return (
            f"[{tag}] {self.label}: analytic={self.analytic:.6g} "
            f"estimate={self.estimate.mean:.6g} (se={self.estimate.std_error:.2g}, "
            f"n={self.estimate.n}) z={self.z_score:+.2f}"
        )
