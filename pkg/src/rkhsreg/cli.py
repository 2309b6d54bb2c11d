"""Command line entry point: ``rkhsreg {solve,verify,probe,gram,validate} --config FILE``.

Exit codes: 0 success, 1 check failure, 2 config error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .config import ConfigError, load_config
from .runner import EXIT, dumps_report, run, write_outputs

COMMANDS = ("solve", "verify", "probe", "gram", "validate")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rkhsreg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="YAML experiment config")
        p.add_argument("--out", help="JSON report path (default: config output.json, else stdout)")
        p.add_argument("--csv", help="CSV sidecar path (default: config output.csv)")
        p.add_argument("--seed", type=int, help="override rng_seed")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        for path, msg in exc.errors:
            print(f"{path or '<root>'}: {msg}", file=sys.stderr)
        return EXIT["config_error"]
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT["config_error"]
    if args.seed is not None:
        if args.seed < 0 or args.seed >= 2 ** 64:
            print("--seed must be an unsigned 64-bit integer", file=sys.stderr)
            return EXIT["config_error"]
        cfg.rng_seed = args.seed

    if args.command == "validate":
        sys.stdout.write(cfg.dumps())
        return 0
    if cfg.mode != args.command:
        print(f"mode: config says {cfg.mode!r} but the command is {args.command!r}", file=sys.stderr)
        return EXIT["config_error"]

    result = run(cfg)
    json_path = args.out or cfg.output.get("json")
    csv_path = args.csv or cfg.output.get("csv")
    write_outputs(result, json_path, csv_path)
    if not json_path:
        sys.stdout.write(dumps_report(result.report))
    if "error" in result.report:
        print(f"{result.report['status']}: {result.report['error']['message']}", file=sys.stderr)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
