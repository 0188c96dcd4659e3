#!/usr/bin/env python3
"""Rewrite tests/golden/ from the default profile.

Run after an intentional change to any numeric output, then review the diff.
"""
import argparse
import shutil
from pathlib import Path

from biphoton.config import parse_config
from biphoton.runner import COMMANDS, run_experiment

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--dest", type=Path, default=GOLDEN)
    args = parser.parse_args()
    cfg = parse_config("")
    for command in COMMANDS:
        out = args.dest / command
        if out.exists():
            shutil.rmtree(out)
        result = run_experiment(cfg, command, out)
        print(f"{command}: {', '.join(p.name for p in result.files)}")


if __name__ == "__main__":
    main()
