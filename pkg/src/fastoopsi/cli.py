"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .binning import binning_infer
from .errors import ConfigError, DomainError, NumericalError, TraceFormatError
from .evaluation import evaluate
from .io import read_column, read_trace, write_columns, write_result
from .model import SimConfig, simulate
from .oopsi import SolverOptions, run
from .wiener import WienerOptions, wiener_filter

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def build_parser():
    parser = _Parser(prog="fastoopsi", description="Spike inference from calcium fluorescence traces.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate a synthetic trace and its ground truth")
    p.add_argument("--T", type=int, default=2000)
    p.add_argument("--dt", type=float, default=0.02)
    p.add_argument("--rate", type=float, default=0.1)
    p.add_argument("--tau", type=float, default=1.5)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--sigma", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True,
                   help="output stem; writes STEM.csv (t,F) and STEM_truth.csv (t,n,C)")

    p = sub.add_parser("infer", help="infer spikes from a trace file")
    p.add_argument("--method", choices=("oopsi", "wiener", "binning"), default="oopsi")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--dt", type=float, default=None,
                   help="frame interval in seconds, required if the file has no time column")
    p.add_argument("--out", required=True, help="output stem; writes STEM.csv and STEM.meta")
    p.add_argument("--iter-max", type=int, default=None)
    p.add_argument("--ltol", type=float, default=None)
    p.add_argument("--gtol", type=float, default=None)

    p = sub.add_parser("evaluate", help="score an inferred train against the truth")
    p.add_argument("--inferred", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--smooth-w", type=int, default=5)
    p.add_argument("--match-k", type=int, default=2)
    p.add_argument("--threshold", type=float, default=0.1)
    return parser


def _stem(out):
    out = Path(out)
    return out.with_suffix("") if out.suffix == ".csv" else out


def cmd_simulate(args):
    cfg = SimConfig(T=args.T, dt=args.dt, rate=args.rate, tau=args.tau, alpha=args.alpha,
                    beta=args.beta, sigma=args.sigma, seed=args.seed)
    n, C, F = simulate(cfg)
    stem = _stem(args.out)
    write_columns(stem.with_name(stem.name + ".csv"), ("F",), [F.values], cfg.dt)
    write_columns(stem.with_name(stem.name + "_truth.csv"), ("n", "C"), [n.values, C.values], cfg.dt)
    return EXIT_OK


def cmd_infer(args):
    F = read_trace(args.infile, dt_override=args.dt)
    if args.method == "oopsi":
        kw = {k: v for k, v in (("iter_max", args.iter_max), ("ltol", args.ltol),
                                ("gtol", args.gtol)) if v is not None}
        result = run(F, SolverOptions(**kw))
    elif args.method == "wiener":
        kw = {k: v for k, v in (("iter_max", args.iter_max), ("gtol", args.gtol)) if v is not None}
        result = wiener_filter(F, opts=WienerOptions(**kw))
    else:
        result = binning_infer(F)
    write_result(result, args.out)
    return EXIT_OK


def cmd_evaluate(args):
    inferred = read_column(args.inferred, "n")
    truth = read_column(args.truth, "n")
    report = evaluate(inferred, truth, w=args.smooth_w, k=args.match_k, theta_det=args.threshold)
    sys.stdout.write(report.to_text())
    return EXIT_OK


COMMANDS = {"simulate": cmd_simulate, "infer": cmd_infer, "evaluate": cmd_evaluate}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except NumericalError as exc:
        print(f"fastoopsi: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ConfigError, DomainError, TraceFormatError, OSError) as exc:
        print(f"fastoopsi: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
