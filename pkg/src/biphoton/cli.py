"""Command-line front end.

    biphoton <command> [--config PATH] [--out DIR] [--seed N]

Exit status: 0 on success, 2 for configuration errors, 3 for runtime errors.
Errors are reported on stderr as a single line ``error[<kind>]: <reason>``.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys

from .config import ConfigError, ExperimentConfig, load_config, parse_config
from .errors import BiphotonError
from .runner import COMMANDS, run_experiment

EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def _parser():
    parser = argparse.ArgumentParser(prog="biphoton", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="YAML configuration file (defaults when omitted)")
    parser.add_argument("--out", help="output directory (overrides the configuration)")
    parser.add_argument("--seed", type=int, help="count-simulation seed (overrides the configuration)")
    return parser


def _fail(kind, exc, status):
    reason = " ".join(str(exc).split())
    print(f"error[{kind}]: {reason}", file=sys.stderr)
    return status


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else parse_config("")
        if args.seed is not None:
            if not 0 <= args.seed < 2**64:
                raise ConfigError(f"--seed must be an unsigned 64-bit integer, got {args.seed}")
            cfg = dataclasses.replace(cfg, counts=dataclasses.replace(cfg.counts, seed=args.seed))
    except ConfigError as exc:
        return _fail("config", exc, EXIT_CONFIG)
    try:
        result = run_experiment(cfg, args.command, args.out)
    except ConfigError as exc:
        return _fail("config", exc, EXIT_CONFIG)
    except (BiphotonError, OSError) as exc:
        return _fail("runtime", f"{args.command}: {exc}", EXIT_RUNTIME)
    print(json.dumps(result.summary, indent=2, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
