"""Command line front end.

Three subcommands:

  run        execute a campaign described by a config file, write CSV
  summarize  aggregate one or more result CSVs to stdout
  predict    closed-form l2 prediction for one plaintext/c0 bit flip

Exit codes: 0 on success, 2 for configuration or parameter problems,
3 for failures while running trials.
"""

from __future__ import annotations

import argparse
import sys

from .errors import ConfigError, FaultLabError, ParameterError
from .harness import (format_summary, load_config, read_csv, run_experiment,
                      summarize, write_csv)
from .scheme import SchemeParams

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="faultlab",
        description="single-bit fault campaigns against an encode/encrypt/"
                    "decrypt/decode pipeline")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a campaign from a config file")
    p_run.add_argument("config", help="path to a key=value config file")
    p_run.add_argument("--out", default=None,
                       help="output CSV path, overrides the config's out key")
    p_run.add_argument("--workers", type=int, default=1,
                       help="process pool size over seed pairs")
    p_run.add_argument("--verbose", action="store_true",
                       help="print progress to stderr")

    p_sum = sub.add_parser("summarize", help="aggregate result CSVs")
    p_sum.add_argument("csvs", nargs="+", help="result files to pool")

    p_pred = sub.add_parser("predict",
                            help="closed-form l2 for one coefficient bit flip")
    p_pred.add_argument("--N", dest="n", type=int, required=True)
    p_pred.add_argument("--q0-bits", dest="q0_bits", type=int, required=True)
    p_pred.add_argument("--num-limbs", dest="num_limbs", type=int, default=1)
    p_pred.add_argument("--delta-log2", dest="delta_log2", type=int, default=40)
    p_pred.add_argument("--slots", type=int, default=None)
    p_pred.add_argument("--coeff", type=int, required=True)
    p_pred.add_argument("--bit", type=int, required=True)
    return parser


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    out = args.out if args.out is not None else cfg.out
    progress = None
    if args.verbose:
        progress = lambda msg: print(msg, file=sys.stderr)
    records = run_experiment(cfg, workers=args.workers, progress=progress)
    write_csv(records, out)
    print(f"wrote {len(records)} records to {out}")
    return EXIT_OK


def _cmd_summarize(args) -> int:
    records = []
    for path in args.csvs:
        records.extend(read_csv(path))
    print(format_summary(summarize(records)))
    return EXIT_OK


def _cmd_predict(args) -> int:
    params = SchemeParams(mode="vanilla", n=args.n, q0_bits=args.q0_bits,
                          num_limbs=args.num_limbs, delta_log2=args.delta_log2,
                          slots=args.slots)
    print(repr(params.predict_l2_norm(args.coeff, args.bit)))
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "summarize":
            return _cmd_summarize(args)
        return _cmd_predict(args)
    except (ConfigError, ParameterError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FaultLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
