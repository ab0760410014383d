"""Command-line entry points.

Subcommands: simulate | classic | aggregate | optimize | sweep | serve.
Every command reads one JSON scenario document (defaults to the built-in
reference scenario), prints its result to stdout and optionally writes
files under --out. Identical config + seed gives byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .config import parse_config, reference_scenario
from .errors import WarbenchError
from .report import (
    DEFAULT_SIM_PATHS,
    run_aggregate,
    run_classic,
    run_optimize,
    run_simulate,
    run_sweep,
)


def _fmt(x: float) -> str:
    """Floats in CSV carry 17 significant digits (bit-faithful)."""
    return format(float(x), ".17g")


def _load_scenario(args):
    if args.config:
        scenario = parse_config(Path(args.config).read_text())
    else:
        scenario = reference_scenario()
    if args.seed is not None:
        scenario = scenario.with_overrides(seed=args.seed)
    return scenario


def _emit_json(result: dict, out_dir: str | None, name: str) -> None:
    text = json.dumps(result, indent=2) + "\n"
    sys.stdout.write(text)
    if out_dir:
        path = Path(out_dir)
        path.mkdir(parents=True, exist_ok=True)
        (path / name).write_text(text)


def _write_csv(out_path: Path, header: str, rows) -> None:
    out_path.parent.mkdir(parents=True, exist_ok=True)
    with open(out_path, "w") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def cmd_simulate(args) -> int:
    scenario = _load_scenario(args)
    result, batch = run_simulate(scenario, n_paths=args.paths, pi=args.pi)
    _emit_json(result, args.out, "simulate.json")
    if args.out:
        rows = (
            (str(i), str(k), _fmt(t), _fmt(batch.B[i, k]), _fmt(batch.R[i, k]))
            for i in range(batch.B.shape[0])
            for k, t in enumerate(batch.times)
        )
        _write_csv(Path(args.out) / "paths.csv", "path_id,k,t,B,R", rows)
    return 0


def cmd_classic(args) -> int:
    scenario = _load_scenario(args)
    result = run_classic(scenario)
    header = "t,B_lanchester,R_lanchester,B_bracken,R_bracken"
    rows = [
        (_fmt(t), _fmt(bl), _fmt(rl), _fmt(bb), _fmt(rb))
        for t, bl, rl, bb, rb in zip(
            result["times"],
            result["lanchester"]["B"],
            result["lanchester"]["R"],
            result["bracken"]["B"],
            result["bracken"]["R"],
        )
    ]
    sys.stdout.write(header + "\n")
    for row in rows:
        sys.stdout.write(",".join(row) + "\n")
    if args.out:
        _write_csv(Path(args.out) / "classic.csv", header, rows)
        (Path(args.out) / "classic.json").write_text(json.dumps(result, indent=2) + "\n")
    return 0


def cmd_aggregate(args) -> int:
    scenario = _load_scenario(args)
    _emit_json(run_aggregate(scenario, pi=args.pi), args.out, "aggregate.json")
    return 0


def cmd_optimize(args) -> int:
    scenario = _load_scenario(args)
    _emit_json(run_optimize(scenario, n_paths=args.paths), args.out, "optimize.json")
    return 0


def cmd_sweep(args) -> int:
    scenario = _load_scenario(args)
    result = run_sweep(scenario, grid_points=args.grid_points)
    header = "pi,objective,stderr"
    rows = [
        (_fmt(p["pi"]), _fmt(p["objective"]), _fmt(p["stderr"]))
        for p in result["points"]
    ]
    sys.stdout.write(header + "\n")
    for row in rows:
        sys.stdout.write(",".join(row) + "\n")
    if args.out:
        _write_csv(Path(args.out) / "sweep.csv", header, rows)
        (Path(args.out) / "sweep.json").write_text(json.dumps(result, indent=2) + "\n")
    return 0


def cmd_serve(args) -> int:
    from .service import serve_forever

    bind = args.bind or os.environ.get("WARBENCH_BIND", "127.0.0.1:8787")
    budget = os.environ.get("WARBENCH_COMPUTE_BUDGET")
    serve_forever(
        bind,
        static_dir=args.static,
        compute_budget=float(budget) if budget else None,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="warbench",
        description="Robust force-allocation workbench for stochastic attrition combat",
    )
    parser.add_argument("--version", action="version", version=f"warbench {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, paths_default=None):
        p.add_argument("--config", help="path to a JSON scenario document")
        p.add_argument("--seed", type=int, help="override the scenario seed")
        p.add_argument("--out", help="directory for result files")
        if paths_default is not None:
            p.add_argument("--paths", type=int, default=paths_default,
                           help=f"number of Monte Carlo paths (default {paths_default})")

    p = sub.add_parser("simulate", help="simulate trajectory fan at a fixed allocation")
    common(p, DEFAULT_SIM_PATHS)
    p.add_argument("--pi", type=float, help="allocation fraction (default: optimizer pi_init)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("classic", help="deterministic baseline trajectories (CSV)")
    common(p)
    p.set_defaults(func=cmd_classic)

    p = sub.add_parser("aggregate", help="barycenter and worst-case shock model")
    common(p)
    p.add_argument("--pi", type=float, help="allocation for the tilt (default: pi_init)")
    p.set_defaults(func=cmd_aggregate)

    p = sub.add_parser("optimize", help="worst-case optimal allocation search")
    common(p, DEFAULT_SIM_PATHS)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("sweep", help="objective vs allocation grid (CSV)")
    common(p)
    p.add_argument("--grid-points", type=int, default=101)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("serve", help="run the HTTP JSON API and console")
    p.add_argument("--bind", help="host:port (default env WARBENCH_BIND or 127.0.0.1:8787)")
    p.add_argument("--static", help="directory with the built console bundle")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except WarbenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
