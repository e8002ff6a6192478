#!/usr/bin/env python3
"""Parameter-matched comparison: QNN depths 2..5 vs same-count MLP layouts.

Counts 10/15/20/25 pair each QNN depth with every classical width layout
of the same trainable-parameter count, under all three activations.
"""

import argparse
import os

from qnnbench.fock import CutoffConfig
from qnnbench.harness import (
    ExperimentSpec,
    aggregate,
    export,
    parameter_match_models,
    run_strategy_parameters,
)
from qnnbench.training import AdamConfig


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seeds", type=int, default=10)
    parser.add_argument("--epochs", type=int, default=10000)
    parser.add_argument("--target", choices=("sine", "heaviside"), default="sine")
    parser.add_argument("--out", default="results/param_match")
    parser.add_argument("--workers", type=int, default=os.cpu_count())
    args = parser.parse_args()

    spec = ExperimentSpec(
        strategy="parameters",
        target_kind=args.target,
        models=parameter_match_models(),
        seeds=args.seeds,
        optimizer=AdamConfig(epochs=args.epochs),
        cutoff=CutoffConfig(),
    )
    print(f"{len(spec.models)} models x {args.seeds} seeds on {args.target}")
    results = run_strategy_parameters(spec, workers=args.workers)
    rows = aggregate(results)
    out_dir = os.path.join(args.out, args.target)
    export(results, rows, out_dir)
    for row in sorted(rows, key=lambda r: (r.param_count, r.model_id)):
        print(
            f"{row.param_count:3d} params {row.model_id:20s} "
            f"mean={row.mean_mse:.3e} min={row.min_mse:.3e}"
        )
    print(f"wrote {out_dir}")


if __name__ == "__main__":
    main()
