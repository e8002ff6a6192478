#!/usr/bin/env python3
"""Overlay the exported best-fit curves (curve_*.csv) in a single SVG.

Reads a results directory produced by `qnnbench run` or the sweep scripts.
"""

import argparse
import csv
import glob
import os


def read_curve(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    xs = [float(r["x"]) for r in rows]
    return xs, [float(r["y_pred"]) for r in rows], [float(r["y_true"]) for r in rows]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("results_dir")
    parser.add_argument("--out", default=None, help="output SVG path")
    args = parser.parse_args()

    import matplotlib

    matplotlib.use("svg")
    import matplotlib.pyplot as plt

    paths = sorted(glob.glob(os.path.join(args.results_dir, "curve_*.csv")))
    if not paths:
        raise SystemExit(f"no curve_*.csv files in {args.results_dir}")

    fig, ax = plt.subplots(figsize=(7, 4.5))
    xs, _, y_true = read_curve(paths[0])
    ax.plot(xs, y_true, "k--", lw=1, label="target")
    for path in paths:
        name = os.path.basename(path)[len("curve_") : -len(".csv")]
        xs, y_pred, _ = read_curve(path)
        ax.plot(xs, y_pred, lw=1.2, label=name)
    ax.set_xlabel("x")
    ax.set_ylabel("prediction")
    ax.legend(fontsize=7)
    fig.tight_layout()
    out = args.out or os.path.join(args.results_dir, "best_fits.svg")
    fig.savefig(out)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
