"""Command-line interface.

Exit status is 0 on success, 2 on configuration or usage errors and 1 on
runtime failures.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import analytic, io
from .exceptions import ConfigError, InvalidArgs, TooLarge, ZeroMass
from .experiment import ExperimentConfig, SavingsReport, preset, run_experiment
from .spatial import build_grid

logger = logging.getLogger("tiered_deploy")

CONFIG_ERRORS = (ConfigError, InvalidArgs, TooLarge, ZeroMass)


def _interval(text: str) -> tuple[float, float]:
    try:
        s, t = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 's,t', got {text!r}") from None
    return s, t


def _print_json(data) -> None:
    json.dump(data, sys.stdout, indent=1, sort_keys=True)
    sys.stdout.write("\n")


def _summary(report: SavingsReport) -> dict:
    return {
        "N": report.config.N,
        "M": report.config.M,
        "beta": report.config.beta,
        "trials": report.config.trials,
        "mean_savings_pct": {a: report.mean_savings(a) for a in report.algorithms},
    }


def _write_outputs(report: SavingsReport, grid, out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    io.dump_json(report.to_dict(), out_dir / "report.json")
    for alg in report.algorithms:
        best = report.best(alg)
        sol = best.solutions[alg]
        io.write_solution(sol, out_dir / f"{alg}_best_solution.json", grid)
        io.write_trace_csv(sol, out_dir / f"{alg}_best_trace.csv")
    logger.info("wrote results to %s", out_dir)


def _run(config: ExperimentConfig, out: str | None) -> int:
    grid = build_grid(config.region, config.density, config.resolution)
    report = run_experiment(config, grid=grid, keep_solutions=out is not None)
    if out is not None:
        _write_outputs(report, grid, Path(out))
    _print_json(_summary(report))
    return 0


def cmd_optimize(args) -> int:
    config = ExperimentConfig.from_json(args.config)
    overrides = {k: v for k, v in (("algorithm", args.algorithm), ("trials", args.trials),
                                   ("seed", args.seed)) if v is not None}
    if overrides:
        config = ExperimentConfig(**{**vars(config), **overrides})
    return _run(config, args.out)


def cmd_reproduce(args) -> int:
    config = preset(args.network, trials=args.trials, seed=args.seed,
                    resolution=args.resolution, maxIterations=args.max_iterations,
                    algorithm=args.algorithm)
    return _run(config, args.out)


def cmd_analytic(args) -> int:
    if args.which == "theorem1":
        s, t = args.interval
        sol = analytic.theorem1_solution(s, t, args.n, args.m, args.beta)
        _print_json(sol.to_dict())
    elif args.which == "lemma2":
        alloc = analytic.lemma2_minimizer(args.n, args.m, args.beta)
        _print_json({"sizes": list(alloc.sizes), "value": alloc.value,
                     "n_large": alloc.n_large, "n_small": alloc.n_small,
                     "len_large": alloc.len_large, "len_small": alloc.len_small})
    else:
        s, t = args.interval
        sol = analytic.prop1_uniform_interval(s, t, args.n, args.beta)
        out = sol.deployment.to_dict()
        out.update(distortion=sol.distortion, beta=args.beta)
        _print_json(out)
    return 0


def cmd_export(args) -> int:
    solution, grid = io.read_solution(args.solution)
    for path in io.export(solution, args.format, args.out, grid, stem=Path(args.solution).stem):
        print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tiered-deploy",
        description="Energy-optimal access point and base station deployment.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("optimize", help="run random-restart trials from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--algorithm", choices=["ttl", "otl", "both"])
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="directory for report.json and best solutions")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("reproduce", help="rerun the WSN1/WSN2 desk experiments")
    p.add_argument("network", choices=["wsn1", "wsn2"])
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--resolution", type=int, default=256)
    p.add_argument("--max-iterations", type=int, default=100)
    p.add_argument("--algorithm", choices=["ttl", "otl", "both"], default="both")
    p.add_argument("--out")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("analytic", help="closed-form optima (prints JSON)")
    p.add_argument("which", choices=["theorem1", "lemma2", "prop1"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--interval", type=_interval, default=(0.0, 1.0),
                   help="s,t (write --interval=-0.5,0.5 for negative s)")
    p.set_defaults(func=cmd_analytic)

    p = sub.add_parser("export", help="convert a solution file")
    p.add_argument("--solution", required=True)
    p.add_argument("--format", choices=["json", "csv", "plotdata"], required=True)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except CONFIG_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
