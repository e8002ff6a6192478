#!/usr/bin/env python3
"""Depth-matched comparison: QNN vs single-neuron chains, depths 1..5.

Desk-scale defaults (10 seeds) finish in minutes; pass --seeds 100 for the
full protocol. Results land in <out>/{sine,heaviside}/ as CSV.
"""

import argparse
import os

from qnnbench.fock import CutoffConfig
from qnnbench.harness import (
    ExperimentSpec,
    aggregate,
    depth_sweep_models,
    export,
    run_strategy_layers,
)
from qnnbench.training import AdamConfig


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seeds", type=int, default=10)
    parser.add_argument("--epochs", type=int, default=10000)
    parser.add_argument("--out", default="results/depth_sweep")
    parser.add_argument("--workers", type=int, default=os.cpu_count())
    args = parser.parse_args()

    for target in ("sine", "heaviside"):
        spec = ExperimentSpec(
            strategy="layers",
            target_kind=target,
            models=depth_sweep_models(),
            seeds=args.seeds,
            optimizer=AdamConfig(epochs=args.epochs),
            cutoff=CutoffConfig(),
        )
        print(f"== {target}: {len(spec.models)} models x {args.seeds} seeds ==")
        results = run_strategy_layers(spec, workers=args.workers)
        rows = aggregate(results)
        out_dir = os.path.join(args.out, target)
        export(results, rows, out_dir)
        for row in rows:
            print(
                f"{row.model_id:20s} mean={row.mean_mse:.3e} "
                f"std={row.std_mse:.3e} min={row.min_mse:.3e}"
            )
        print(f"wrote {out_dir}")


if __name__ == "__main__":
    main()
