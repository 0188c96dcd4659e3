#!/usr/bin/env python3
"""Sweep the opposite-linear mask delay and tabulate where the SFG peak lands."""
import argparse
import csv
import sys

import numpy as np

from biphoton.config import load_config, parse_config
from biphoton.runner import build_chain
from biphoton.sfg import delay_scan
from biphoton.wavefunction import correlation_fwhm, relative_wavefunction


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--config", help="YAML configuration (defaults when omitted)")
    parser.add_argument("--min", type=float, default=-400.0, help="first mask delay [fs]")
    parser.add_argument("--max", type=float, default=400.0, help="last mask delay [fs]")
    parser.add_argument("--count", type=int, default=17)
    args = parser.parse_args()

    cfg = load_config(args.config) if args.config else parse_config("")
    step = cfg.scan.step
    delays = cfg.scan.start + step * np.arange(round((cfg.scan.stop - cfg.scan.start) / step) + 1)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["mask_delay_fs", "argmax_fs", "fwhm_fs"])
    for T in np.linspace(args.min, args.max, args.count) * 1e-15:
        chain = build_chain(cfg, kind="opposite_linear", delay=T)
        G = relative_wavefunction(chain.spectrum, chain.pair_filter)
        argmax = delays[np.argmax(delay_scan(G, delays))]
        writer.writerow([f"{T * 1e15:.6g}", f"{argmax * 1e15:.6g}", f"{correlation_fwhm(G) * 1e15:.6g}"])


if __name__ == "__main__":
    main()
