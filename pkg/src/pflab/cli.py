"""Command-line front door: run checks, emit tables and machine-readable
summaries.

Exit codes: 0 when every executed check passes, 1 on any statistical failure,
2 on usage errors.  With a fixed seed the JSON summary is byte-identical
across runs and worker counts (per-experiment streams are keyed by name, and
wall time is deliberately left out of the serialized artifact).
"""

from __future__ import annotations

import argparse
import concurrent.futures
import csv
import io
import json
import os
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from .closedform import r_of_t, rho_curve
from .experiments import EXPERIMENTS, RunConfig, run_single_experiment
from .report import CheckReport

__all__ = ["main", "run_experiment", "SuiteSummary", "emit_rho_curve"]

_ENV_PREFIX = "PFLAB_"


@dataclass
class SuiteSummary:
    reports: list
    pass_count: int
    fail_count: int
    wall_time: float
    seed: int
    experiments: list

    @classmethod
    def collect(cls, reports: list[CheckReport], seed: int, experiments: list[str], wall: float) -> "SuiteSummary":
        n_pass = sum(1 for r in reports if r.passed)
        return cls(
            reports=reports,
            pass_count=n_pass,
            fail_count=len(reports) - n_pass,
            wall_time=wall,
            seed=seed,
            experiments=list(experiments),
        )

    @property
    def all_passed(self) -> bool:
        return self.fail_count == 0

    def to_json(self) -> str:
        # wall time excluded on purpose: the artifact must be byte-identical
        # across runs and worker counts for a fixed seed
        payload = {
            "seed": self.seed,
            "experiments": self.experiments,
            "pass": self.pass_count,
            "fail": self.fail_count,
            "checks": [r.to_dict() for r in self.reports],
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["check", "analytic", "estimate", "std_error", "n", "z", "pass", "threshold"])
        for r in self.reports:
            d = r.to_dict()
            writer.writerow([d["check"], d["analytic"], d["estimate"], d["std_error"], d["n"], d["z"], d["pass"], d["threshold"]])
        return buf.getvalue()


def _run_one(args: tuple) -> tuple[str, list]:
    name, cfg = args
    return name, run_single_experiment(name, cfg)


def run_experiment(cfg: RunConfig) -> SuiteSummary:
    """Execute the selected experiment(s); results are ordered by the registry
    regardless of worker scheduling, so output is reproducible."""
    names = list(EXPERIMENTS) if cfg.experiment == "all" else [cfg.experiment]
    for name in names:
        if name not in EXPERIMENTS:
            raise KeyError(name)
    start = time.perf_counter()
    results: dict[str, list] = {}
    if cfg.workers > 1 and len(names) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            for name, reports in pool.map(_run_one, [(n, cfg) for n in names]):
                results[name] = reports
    else:
        for name in names:
            results[name] = run_single_experiment(name, cfg)
    reports = [r for name in names for r in results[name]]
    wall = time.perf_counter() - start
    return SuiteSummary.collect(reports, cfg.seed, names, wall)


def emit_rho_curve(t_lo: float, t_hi: float, points: int, out: str) -> None:
    """CSV of (t, r(t), u = 1/sqrt(t), rho(u)) over a log-spaced t-range."""
    if t_lo <= 0 or t_hi <= t_lo:
        raise ValueError("need 0 < t_lo < t_hi")
    ts = np.geomspace(t_lo, t_hi, points)
    us = 1.0 / np.sqrt(ts)
    rs = r_of_t(ts)
    rhos = rho_curve(us)
    with open(out, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", "r_t", "u", "rho_u"])
        for row in zip(ts, rs, us, rhos):
            writer.writerow([f"{v:.12g}" for v in row])


def _env_default(name: str, cast, fallback):
    raw = os.environ.get(_ENV_PREFIX + name)
    if raw is None:
        return fallback
    return cast(raw)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="pflab",
        description="Run formula-vs-oracle checks for last-passage and past-future martingale identities.",
    )
    p.add_argument("--experiment", default=_env_default("EXPERIMENT", str, "all"),
                   help="experiment selector (see --list), or 'all'")
    p.add_argument("--seed", type=int, default=_env_default("SEED", int, 42))
    p.add_argument("--paths", type=int, default=_env_default("PATHS", int, 20_000))
    p.add_argument("--grid", type=int, default=_env_default("GRID", int, 512),
                   help="grid resolution (power of two)")
    p.add_argument("--tol-multiplier", type=float, default=_env_default("TOL_MULTIPLIER", float, 1.0))
    p.add_argument("--workers", type=int, default=_env_default("WORKERS", int, 1))
    p.add_argument("--out", default=_env_default("OUT", str, None), help="write the summary to this path")
    p.add_argument("--format", choices=("json", "csv"), default=_env_default("FORMAT", str, "json"))
    p.add_argument("--list", action="store_true", help="list experiment selectors and exit")
    p.add_argument("--emit-rho", nargs=4, metavar=("T_LO", "T_HI", "POINTS", "OUT"),
                   help="write the defect-curve CSV (t, r(t), u, rho(u)) and exit")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.list:
        for name in EXPERIMENTS:
            print(name)
        return 0

    if args.emit_rho:
        t_lo, t_hi, points, out = args.emit_rho
        emit_rho_curve(float(t_lo), float(t_hi), int(points), out)
        print(f"wrote {out}")
        return 0

    try:
        cfg = RunConfig(
            seed=args.seed,
            paths=args.paths,
            grid=args.grid,
            tol_multiplier=args.tol_multiplier,
            out=args.out,
            format=args.format,
            experiment=args.experiment,
            workers=args.workers,
        )
        summary = run_experiment(cfg)
    except (KeyError, ValueError) as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 2

    for r in summary.reports:
        print(r)
    print(
        f"{summary.pass_count} passed, {summary.fail_count} failed "
        f"({summary.wall_time:.1f}s, seed={summary.seed})"
    )
    payload = summary.to_json() if cfg.format == "json" else summary.to_csv()
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(payload)
    return 0 if summary.all_passed else 1


if __name__ == "__main__":
    sys.exit(main())
