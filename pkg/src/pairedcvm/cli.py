"""Command line interface: ``pairedcvm {test,simulate,ingest}``."""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import platform
import sys
import time
from dataclasses import replace
from pathlib import Path

import numpy as np
import scipy
import sklearn

from . import __version__
from .exceptions import ConfigError, DomainError, GridMismatchError, IngestError
from .ingest import MODES, SegmentationConfig, pair_series, read_series_csv, to_curves, \
    write_curves_csv
from .projection import DirectionSamplerConfig
from .resampling import ResamplingConfig, run_test
from .simulate import ScenarioConfig, parse_scenarios, preset_scenarios, run_study

SEED_ENV = "PAIREDCVM_SEED"
_OPERATIONAL_ERRORS = (ConfigError, DomainError, GridMismatchError, IngestError, OSError)


class CLIError(Exception):
    pass


def _versions():
    return {
        "pairedcvm": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "scikit-learn": sklearn.__version__,
    }


def _sha256(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def manifest(subcommand, config, seed, started):
    return {
        "subcommand": subcommand,
        "config": config,
        "seed": seed,
        "versions": _versions(),
        "duration_seconds": round(time.perf_counter() - started, 6),
    }


def _default_seed():
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise CLIError(f"{SEED_ENV}={raw!r} is not an integer") from None


def _write_output(text, output):
    if output is None or output == "-":
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8")


def _segmentation(args):
    return SegmentationConfig(args.segments, args.points_per_segment, args.mode, args.grid_points)


def cmd_test(args):
    started = time.perf_counter()
    seed = args.seed if args.seed is not None else _default_seed()
    seg = _segmentation(args)
    series_1 = read_series_csv(args.first)
    series_2 = read_series_csv(args.second)
    sample = pair_series(series_1, series_2, seg)
    config = ResamplingConfig(
        replicates=args.replicates, alpha=args.alpha, seed=seed,
        direction_count=args.directions,
        sampler=DirectionSamplerConfig(max_index=args.max_index),
    )
    result = run_test(sample, config, n_jobs=args.threads)
    report = result.to_dict(include_replicates=args.include_replicates)
    report["first"] = series_1.name
    report["second"] = series_2.name
    report["manifest"] = manifest("test", {
        "first": str(args.first), "first_sha256": _sha256(args.first),
        "second": str(args.second), "second_sha256": _sha256(args.second),
        "segments": seg.segments, "points_per_segment": seg.points_per_segment,
        "mode": seg.mode, "grid_points": seg.grid.point_count,
        "directions": args.directions, "replicates": args.replicates,
        "alpha": args.alpha, "max_index": args.max_index,
    }, seed, started)
    _write_output(json.dumps(report, indent=2, sort_keys=True) + "\n", args.output)
    return 0


def _scenarios_from_args(args):
    base = ScenarioConfig(
        grid_points=args.grid_points,
        resampling=ResamplingConfig(replicates=args.replicates, direction_count=args.directions),
    )
    if args.scenarios is not None:
        scenarios = parse_scenarios(Path(args.scenarios).read_text(encoding="utf-8"), base)
    elif args.preset is not None:
        scenarios = preset_scenarios(args.preset, base)
    else:
        scenarios = [replace(base, a1=args.a1, a2=args.a2, b1=args.b1, b2=args.b2, r=args.r,
                             n=args.n, alphas=tuple(args.alpha))]
    if args.runs is not None:
        scenarios = [replace(s, runs=args.runs) for s in scenarios]
    return scenarios


def cmd_simulate(args):
    started = time.perf_counter()
    seed = args.seed if args.seed is not None else _default_seed()
    scenarios = _scenarios_from_args(args)
    report = run_study(scenarios, seed=seed, n_jobs=args.threads)
    meta = manifest("simulate", {
        "scenarios": {str(k): v for k, v in report.scenarios.items()},
        "source": args.scenarios or args.preset or "inline",
    }, seed, started)
    _write_output(report.to_csv("manifest: " + json.dumps(meta, sort_keys=True)), args.output)
    return 0


def cmd_ingest(args):
    started = time.perf_counter()
    seg = _segmentation(args)
    series = read_series_csv(args.series)
    curves = to_curves(series, seg)
    import io

    buf = io.StringIO()
    meta = manifest("ingest", {
        "series": str(args.series), "series_sha256": _sha256(args.series),
        "segments": seg.segments, "points_per_segment": seg.points_per_segment,
        "mode": seg.mode, "grid_points": seg.grid.point_count,
    }, None, started)
    buf.write("# manifest: " + json.dumps(meta, sort_keys=True) + "\n")
    write_curves_csv(curves, buf)
    _write_output(buf.getvalue(), args.output)
    return 0


def _add_segmentation(p):
    p.add_argument("--segments", type=int, default=20, help="number of windows (default 20)")
    p.add_argument("--points-per-segment", type=int, default=12,
                   help="sampling steps per window (default 12, monthly data in yearly windows)")
    p.add_argument("--mode", choices=MODES, default="log_returns")
    p.add_argument("--grid-points", type=int, default=None,
                   help="output grid size (default 10 * points-per-segment + 1)")


def _add_common(p):
    p.add_argument("--seed", type=int, default=None,
                   help=f"master seed (default ${SEED_ENV} or 0)")
    p.add_argument("--threads", type=int, default=1, help="worker cap; never changes results")
    p.add_argument("-o", "--output", default=None, help="output file (default stdout)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="pairedcvm",
        description="Marginal homogeneity tests for paired functional data.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("test", help="test two date,value series for equal increment laws")
    p.add_argument("first")
    p.add_argument("second")
    _add_segmentation(p)
    p.add_argument("--directions", type=int, default=500)
    p.add_argument("--replicates", type=int, default=999)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--max-index", type=int, default=50)
    p.add_argument("--include-replicates", action="store_true")
    _add_common(p)
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("simulate", help="empirical size/power on Brownian bridge scenarios")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--scenarios", help="file with lines 'a1 a2 b1 b2 r n alpha runs'")
    src.add_argument("--preset", choices=("table1", "table2", "growth"))
    p.add_argument("--a1", type=float, default=1.0)
    p.add_argument("--a2", type=float, default=1.0)
    p.add_argument("--b1", type=float, default=0.0)
    p.add_argument("--b2", type=float, default=0.0)
    p.add_argument("--r", type=float, default=0.0)
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--alpha", type=float, nargs="+", default=[0.05])
    p.add_argument("--runs", type=int, default=None,
                   help="runs per scenario (overrides the file; default 500 inline)")
    p.add_argument("--replicates", type=int, default=199)
    p.add_argument("--directions", type=int, default=200)
    p.add_argument("--grid-points", type=int, default=101)
    _add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("ingest", help="dump increment curves of one series as segment,t,value")
    p.add_argument("series")
    _add_segmentation(p)
    p.add_argument("-o", "--output", default=None, help="output file (default stdout)")
    p.set_defaults(func=cmd_ingest)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CLIError, *_OPERATIONAL_ERRORS) as exc:
        print(f"pairedcvm {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
