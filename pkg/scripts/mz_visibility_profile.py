#!/usr/bin/env python3
"""Biphoton and single-photon fringe visibility versus interferometer retardation.

Scans from zero retardation out past the calcite offset and reports the
visibility in consecutive windows one IR fringe wide.
"""
import argparse
import csv
import math
import sys

import numpy as np

from biphoton.config import load_config, parse_config
from biphoton.interference import MzScanSpec, mz_scan, visibility
from biphoton.runner import build_chain


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="YAML configuration (defaults when omitted)")
    parser.add_argument("--stop", type=float, default=600.0, help="largest retardation [fs]")
    parser.add_argument("--windows", type=int, default=60)
    args = parser.parse_args()

    cfg = load_config(args.config) if args.config else parse_config("")
    spectrum = build_chain(cfg, kind="none").spectrum
    ir_period = 2 * math.pi / spectrum.grid.center
    spec = MzScanSpec(spectrum, 0.0, args.stop * 1e-15, ir_period / 64, offset=0.0)
    biphoton, single = mz_scan(spec)

    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["center_fs", "biphoton_visibility", "single_photon_visibility"])
    width = 1.05 * ir_period
    for center in np.linspace(width, args.stop * 1e-15 - width, args.windows):
        writer.writerow([f"{center * 1e15:.6g}", f"{visibility(biphoton, center, width):.6f}",
                         f"{visibility(single, center, width):.6f}"])


if __name__ == "__main__":
    main()
