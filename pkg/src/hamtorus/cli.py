"""Command line front end.

Subcommands: ``theory`` prints closed-form predictions, ``simulate`` runs a
Monte Carlo experiment, ``sweep`` runs a family of experiments along n or a,
and ``verify`` runs the self-check suites.  Exit codes: 0 success, 1 invalid
arguments or configuration, 2 budget exceeded, 3 verification failure.

``simulate --out PREFIX`` writes three files: ``PREFIX.summary.json`` with
deterministic aggregated results, ``PREFIX.trials.csv`` with one row per
trial, and ``PREFIX.manifest.json`` describing the run.  Wall-clock
information lives only in the manifest and the csv ``ms`` column, so the
summary is byte-identical across reruns regardless of worker count.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from . import __version__, theory
from .errors import BudgetExceededError
from .montecarlo import (
    ExperimentConfig,
    config_from_dict,
    config_to_dict,
    run_trials,
    summarize,
    sweep,
    verify_oracle,
    verify_perfect,
    verify_properties,
)


class _Parser(argparse.ArgumentParser):
    # argparse normally exits on bad flags; raise instead so main() owns codes
    def error(self, message):
        raise ValueError(message)


@dataclass(frozen=True)
class RunManifest:
    """Provenance record for one CLI run; the only artifact with timestamps."""

    version: str
    command: str
    config: dict
    workers: int
    started_at: str
    finished_at: str
    duration_s: float

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "command": self.command,
            "config": self.config,
            "workers": self.workers,
            "started_at": self.started_at,
            "finished_at": self.finished_at,
            "duration_s": self.duration_s,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RunManifest":
        fields = {
            "version", "command", "config", "workers",
            "started_at", "finished_at", "duration_s",
        }
        unknown = set(data) - fields
        if unknown:
            raise ValueError(f"unknown manifest keys {sorted(unknown)}")
        missing = fields - set(data)
        if missing:
            raise ValueError(f"manifest is missing {sorted(missing)}")
        return cls(**{k: data[k] for k in fields})


def _parse_dims_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip() != "")
    except ValueError:
        raise ValueError(f"cannot parse dimension list {text!r}") from None


def _parse_fixed_pairs(text: str) -> list[list[int]]:
    pairs = []
    for part in text.split(","):
        if ":" not in part:
            raise ValueError(f"expected index:value pairs, got {text!r}")
        i, v = part.split(":", 1)
        try:
            pairs.append([int(i), int(v)])
        except ValueError:
            raise ValueError(f"expected index:value pairs, got {text!r}") from None
    return pairs


def _config_from_args(args) -> ExperimentConfig:
    base: dict = {}
    if args.config is not None:
        try:
            base = json.loads(Path(args.config).read_text())
        except OSError as e:
            raise ValueError(f"cannot read config file: {e}") from None
        except json.JSONDecodeError as e:
            raise ValueError(f"config file is not valid JSON: {e}") from None
        if not isinstance(base, dict):
            raise ValueError("config file must hold a JSON object")
    overlay = {
        "d": args.d,
        "n": args.n,
        "trials": args.trials,
        "master_seed": args.seed,
        "j": args.j,
        "a": args.a,
        "p": args.p,
        "theta": args.theta,
        "mode": args.mode,
        "family_cap": args.family_cap,
    }
    if args.record_dims is not None:
        overlay["record_dims"] = list(_parse_dims_list(args.record_dims))
    if args.conditional_open is not None:
        overlay["conditional_open"] = _parse_fixed_pairs(args.conditional_open)
    base.update({k: v for k, v in overlay.items() if v is not None})
    # an explicit amplitude overrides a density inherited from the config file
    if args.a is not None and args.p is None:
        base["p"] = None
    if "master_seed" not in base:
        raise ValueError("a seed is required: pass --seed or put master_seed in the config")
    for key in ("d", "n", "trials"):
        if key not in base:
            raise ValueError(f"--{key if key != 'trials' else 'trials'} is required")
    return config_from_dict(base)


def _add_experiment_flags(p: argparse.ArgumentParser):
    p.add_argument("--d", type=int, help="number of torus dimensions")
    p.add_argument("--n", type=int, help="side length")
    p.add_argument("--trials", type=int, help="number of Monte Carlo trials")
    p.add_argument("--seed", type=int, help="master seed; trials derive from it")
    p.add_argument("--j", type=int, help="critical level (default 1)")
    p.add_argument("--a", type=float, help="amplitude for the critical density")
    p.add_argument("--p", type=float, help="explicit seed density, overrides --a")
    p.add_argument("--theta", type=int, help="growth threshold (default 2)")
    p.add_argument("--mode", choices=("exact", "maximal"), help="spanned-count mode")
    p.add_argument("--record-dims", dest="record_dims",
                   help="comma list of dimensions to record events for")
    p.add_argument("--conditional-open", dest="conditional_open",
                   help="subtorus opened before growth, as index:value pairs")
    p.add_argument("--family-cap", dest="family_cap", type=int,
                   help="cap on generated-family size in exact mode")
    p.add_argument("--config", help="JSON file with base configuration")
    p.add_argument("--workers", type=int, default=1, help="worker processes")
    p.add_argument("--out", help="output path prefix")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hamtorus", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"hamtorus {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("theory", help="closed-form predictions for a torus family")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--j", type=int, default=1)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--n", type=int, help="side length, for concrete densities")
    p.add_argument("--p", type=float, help="explicit density for the count mean")
    p.set_defaults(func=cmd_theory)

    p = sub.add_parser("simulate", help="run one Monte Carlo experiment")
    _add_experiment_flags(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="run experiments along n or a")
    _add_experiment_flags(p)
    p.add_argument("--param", choices=("n", "a"), required=True)
    p.add_argument("--values", required=True, help="comma list of parameter values")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run self-check suites")
    p.add_argument("--suite", choices=("all", "oracle", "properties", "perfect"),
                   default="all")
    p.add_argument("--cases", type=int, default=400, help="randomized case count")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)
    return parser


def cmd_theory(args) -> int:
    d, j = args.d, args.j
    lam = theory.poisson_intensity(j, d, args.a)
    exponent = theory.critical_exponent(j, d)
    info = {
        "d": d,
        "j": j,
        "j_max": theory.j_max(d),
        "amplitude": args.a,
        "critical_exponent": float(exponent),
        "critical_exponent_exact": f"{exponent.numerator}/{exponent.denominator}",
        "lambda": lam,
        "predicted_spanning_limit": theory.predicted_spanning_limit(j, d, args.a),
    }
    if args.n is not None:
        info["n"] = args.n
        info["critical_p"] = theory.critical_p(j, d, args.a, args.n)
        if args.p is not None:
            info["p"] = args.p
            info["count_mean_leading"] = theory.m2i_leading(args.n, args.p, j)
    print(json.dumps(info, indent=2, sort_keys=True))
    return 0


def _trials_csv_rows(cfg: ExperimentConfig, results):
    j2 = 2 * cfg.j
    d = cfg.dims.d
    header = ["trial_index", "m", "Y_exact", "Y_maximal", f"I_{j2}", f"C_{j2}"]
    if d != j2:
        header.append(f"I_{d}")
    header += ["max_dim", "truncated", "ms"]
    yield header
    for r in results:
        row = [
            r.trial_index,
            r.seed_count,
            "" if r.y_exact is None else r.y_exact[j2],
            r.y_maximal[j2],
            int(r.spanned[j2]),
            int(r.covered[j2]),
        ]
        if d != j2:
            row.append(int(r.spanned[d]))
        row += [r.max_open_dim, int(r.truncated), f"{r.ms:.3f}"]
        yield row


def _write_manifest(prefix: str, command: str, config: dict, workers: int,
                    started: datetime, duration: float):
    manifest = RunManifest(
        version=__version__,
        command=command,
        config=config,
        workers=workers,
        started_at=started.isoformat(),
        finished_at=datetime.now(timezone.utc).isoformat(),
        duration_s=duration,
    )
    path = Path(f"{prefix}.manifest.json")
    path.write_text(json.dumps(manifest.to_dict(), indent=2, sort_keys=True) + "\n")
    return path


def cmd_simulate(args) -> int:
    cfg = _config_from_args(args)
    workers = max(1, args.workers)
    started = datetime.now(timezone.utc)
    t0 = time.perf_counter()
    results = run_trials(cfg, workers)
    summary = summarize(cfg, results)
    duration = time.perf_counter() - t0
    summary_text = json.dumps(summary.to_dict(), indent=2, sort_keys=True) + "\n"
    if args.out is None:
        sys.stdout.write(summary_text)
        return 0
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    summary_path = Path(f"{args.out}.summary.json")
    summary_path.write_text(summary_text)
    csv_path = Path(f"{args.out}.trials.csv")
    with csv_path.open("w", newline="") as fh:
        csv.writer(fh).writerows(_trials_csv_rows(cfg, results))
    manifest_path = _write_manifest(
        args.out, "simulate", config_to_dict(cfg), workers, started, duration
    )
    for path in (summary_path, csv_path, manifest_path):
        print(f"wrote {path}")
    return 0


def cmd_sweep(args) -> int:
    values_raw = [part for part in args.values.split(",") if part.strip() != ""]
    if not values_raw:
        raise ValueError("--values must list at least one value")
    try:
        values = [int(v) for v in values_raw] if args.param == "n" else [float(v) for v in values_raw]
    except ValueError:
        raise ValueError(f"cannot parse --values {args.values!r}") from None
    if args.param == "n" and args.n is None:
        args.n = int(values[0])
    cfg = _config_from_args(args)
    workers = max(1, args.workers)
    started = datetime.now(timezone.utc)
    t0 = time.perf_counter()
    cells = sweep(cfg, args.param, values, workers)
    duration = time.perf_counter() - t0
    payload = [{"value": v, "summary": s.to_dict()} for v, s in cells]
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out is None:
        sys.stdout.write(text)
        return 0
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    sweep_path = Path(f"{args.out}.sweep.json")
    sweep_path.write_text(text)
    manifest_path = _write_manifest(
        args.out,
        "sweep",
        {"base": config_to_dict(cfg), "parameter": args.param, "values": values},
        workers,
        started,
        duration,
    )
    for path in (sweep_path, manifest_path):
        print(f"wrote {path}")
    return 0


def cmd_verify(args) -> int:
    reports = []
    if args.suite in ("all", "oracle"):
        reports.append(verify_oracle(cases=args.cases, master_seed=args.seed))
    if args.suite in ("all", "properties"):
        reports.append(verify_properties(cases=args.cases, master_seed=args.seed + 1))
    if args.suite in ("all", "perfect"):
        reports.append(verify_perfect())
    failed = False
    for report in reports:
        status = "ok" if report.ok else f"{len(report.failures)} FAILURES"
        print(f"suite {report.suite}: {report.cases} cases, {status}")
        for line in report.failures[:10]:
            print(f"  {line}")
        if len(report.failures) > 10:
            print(f"  ... and {len(report.failures) - 10} more")
        failed = failed or not report.ok
    return 3 if failed else 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as e:  # argparse --help/--version
        code = e.code
        return code if isinstance(code, int) else 0
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except BudgetExceededError as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
