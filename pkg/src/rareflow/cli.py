"""``rareflow`` command line.

    rareflow run --config FILE [--method mc|ips|hfmc|all] [--seed N]
                 [--replications N] [--ns N] [--nt N] [--out DIR]
                 [--desk-scale] [--jobs N]
    rareflow price --analytic [--config FILE] [parameter flags]

Exit codes: 0 ok, 2 config error, 3 I/O error, 4 engine failure.
"""
from __future__ import annotations

import argparse
import sys

from .model_payoff import analytic_doc_price
from .runner import ConfigError, default_jobs, emit_csv, parse_config, run_experiment

EXIT_OK, EXIT_CONFIG, EXIT_IO, EXIT_ENGINE = 0, 2, 3, 4

# flag dest -> config key
_PARAM_FLAGS = {
    "x0": float, "strike": float, "barrier": float, "r": float, "q": float, "mu": float,
    "sigma": float, "T": float, "tilt": float, "delta": float, "leapfrog_steps": int,
    "mass": float, "beta": float, "tempering": str, "hfmc_weighting": str,
    "resampling": str, "timing": str,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _add_param_flags(p):
    p.add_argument("--config", help="flat key=value config file")
    for dest, typ in _PARAM_FLAGS.items():
        p.add_argument("--" + dest.replace("_", "-"), dest=dest, type=typ, default=None)
    p.add_argument("--ns", dest="n_s", type=int, default=None)
    p.add_argument("--nt", dest="n_t", type=int, default=None)
    p.add_argument("--desk-scale", dest="desk_scale", action="store_const", const=True,
                   default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rareflow", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="run replications and write CSV tables")
    _add_param_flags(run)
    run.add_argument("--method", dest="methods", default=None,
                     help="mc, ips, hfmc, all or a comma separated list")
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--replications", type=int, default=None)
    run.add_argument("--out", default=None)
    run.add_argument("--jobs", type=int, default=None)

    price = sub.add_parser("price", help="print the closed-form reference price")
    _add_param_flags(price)
    price.add_argument("--analytic", action="store_true", required=True)
    return parser


def _overrides(args) -> dict:
    skip = {"command", "config", "analytic"}
    return {k: v for k, v in vars(args).items() if k not in skip}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides = _overrides(args)
    if args.command == "run" and overrides.get("jobs") is None:
        try:
            overrides["jobs"] = default_jobs()
        except ValueError:
            print("rareflow: RAREFLOW_JOBS must be an integer", file=sys.stderr)
            return EXIT_CONFIG
    try:
        cfg = parse_config(args.config, overrides)
    except ConfigError as exc:
        print(f"rareflow: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"rareflow: cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if args.command == "price":
        print(format(analytic_doc_price(cfg.params, cfg.option), ".9g"))
        return EXIT_OK

    reports = run_experiment(cfg)
    failed = [r for r in reports.values() if r.failed]
    for r in failed:
        print(f"rareflow: {r.method} failed: {r.error}", file=sys.stderr)
    try:
        rep_path, sum_path = emit_csv(reports, cfg.out)
    except OSError as exc:
        print(f"rareflow: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"rareflow: {exc}", file=sys.stderr)
        return EXIT_ENGINE
    for r in reports.values():
        if not r.failed and r.M_s >= 2:
            print(f"{r.method:>5}  mean={r.mean:.6f}  st_dev={r.st_dev:.6f}  "
                  f"rmse={r.rmse:.6f}  fom={r.fom:.1f}")
    print(f"wrote {rep_path} and {sum_path}")
    return EXIT_ENGINE if failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
