"""Experiment orchestration: model sweeps, seed fans, aggregation, CSV export.

Two comparison protocols:

* strategy "layers": depth-matched. One quantum neuron vs one classical
  neuron per layer, depths 1..5, all three activations.
* strategy "parameters": parameter-matched. QNN depths 2..5 give counts
  10/15/20/25; each count is paired with every classical width layout of
  the same count (TABLE1_CONFIGS) under every activation.

Runs are independent work items executed on a process pool; rows are
emitted in (model, seed) order regardless of completion order, so
re-running a spec reproduces runs.csv byte for byte apart from the
runtime column.
"""

import csv
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .data import TARGET_KINDS, make_task, target_batch
from .fock import CutoffConfig
from .mlp import ACTIVATIONS, param_count
from .training import AdamConfig, MlpModel, QnnModel, RunResult, train, with_strategy

__all__ = [
    "TABLE1_CONFIGS",
    "ModelDescriptor",
    "ExperimentSpec",
    "AggregateRow",
    "depth_sweep_models",
    "parameter_match_models",
    "run_experiment",
    "run_strategy_layers",
    "run_strategy_parameters",
    "aggregate",
    "export",
    "read_runs_csv",
    "RUNS_COLUMNS",
    "AGGREGATE_COLUMNS",
]

logger = logging.getLogger(__name__)

# Classical hidden-layer width layouts per trainable-parameter count.
TABLE1_CONFIGS = {
    10: ((3,),),
    15: ((1, 4), (4, 1), (1, 2, 2), (2, 2, 1)),
    20: ((1, 1, 5), (1, 5, 1), (2, 1, 4), (3, 1, 3), (4, 1, 2), (5, 1, 1)),
    25: ((8,), (2, 5), (5, 2)),
}

STRATEGIES = ("layers", "parameters")

RUNS_COLUMNS = [
    "model_id",
    "target",
    "strategy",
    "layers",
    "params",
    "activation",
    "seed",
    "train_mse",
    "test_mse",
    "leakage_flag",
    "runtime_s",
]

AGGREGATE_COLUMNS = [
    "model_id",
    "target",
    "strategy",
    "layers",
    "params",
    "activation",
    "n_seeds",
    "mean_mse",
    "std_mse",
    "min_mse",
]


@dataclass(frozen=True)
class ModelDescriptor:
    """Serializable recipe for one trainable model."""

    kind: str  # "qnn" | "chain" | "mlp"
    depth: int = 0
    hidden_widths: tuple = ()
    activation: str = ""

    def __post_init__(self):
        if self.kind not in ("qnn", "chain", "mlp"):
            raise ValueError(f"unknown model kind {self.kind!r}")
        if self.kind in ("qnn", "chain") and self.depth < 1:
            raise ValueError(f"{self.kind} descriptor needs depth >= 1")
        if self.kind in ("chain", "mlp") and self.activation not in ACTIVATIONS:
            raise ValueError(
                f"{self.kind} descriptor needs an activation from {ACTIVATIONS}"
            )
        object.__setattr__(self, "hidden_widths", tuple(self.hidden_widths))

    def n_params(self) -> int:
        if self.kind == "qnn":
            return 5 * self.depth
        if self.kind == "chain":
            return 2 * self.depth
        return param_count(self.hidden_widths)

    def build(self, cutoff: CutoffConfig):
        if self.kind == "qnn":
            return QnnModel(self.depth, cutoff)
        if self.kind == "chain":
            return MlpModel.chain(self.depth, self.activation)
        return MlpModel(self.hidden_widths, self.activation)


@dataclass(frozen=True)
class ExperimentSpec:
    strategy: str
    target_kind: str
    models: tuple
    seeds: int = 10
    seed_base: int = 0
    optimizer: AdamConfig = field(default_factory=AdamConfig)
    cutoff: CutoffConfig = field(default_factory=CutoffConfig)
    train_points: int = 20
    test_points: int = 200

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"strategy must be one of {STRATEGIES}")
        if self.target_kind not in TARGET_KINDS:
            raise ValueError(f"target_kind must be one of {TARGET_KINDS}")
        if self.seeds < 1:
            raise ValueError(f"seeds must be >= 1, got {self.seeds}")
        object.__setattr__(self, "models", tuple(self.models))
        if not self.models:
            raise ValueError("spec needs at least one model")
        if self.strategy == "parameters":
            qnn_counts = {m.n_params() for m in self.models if m.kind == "qnn"}
            for m in self.models:
                if m.kind != "qnn" and m.n_params() not in qnn_counts:
                    raise ValueError(
                        f"parameter-matched spec: {m} has {m.n_params()} parameters, "
                        f"not matched by any QNN depth ({sorted(qnn_counts)})"
                    )

    def seed_list(self) -> list:
        return list(range(self.seed_base, self.seed_base + self.seeds))


def depth_sweep_models(
    depths=(1, 2, 3, 4, 5), activations=ACTIVATIONS, include_qnn=True
) -> tuple:
    """Strategy-1 lineup: QNN(L) plus one chain per activation, per depth."""
    models = []
    for depth in depths:
        if include_qnn:
            models.append(ModelDescriptor("qnn", depth=depth))
        for act in activations:
            models.append(ModelDescriptor("chain", depth=depth, activation=act))
    return tuple(models)


def parameter_match_models(
    depths=(2, 3, 4, 5), activations=ACTIVATIONS, include_qnn=True
) -> tuple:
    """Strategy-2 lineup: QNN(L) plus every same-count width layout x activation."""
    models = []
    for depth in depths:
        count = 5 * depth
        if count not in TABLE1_CONFIGS:
            raise ValueError(
                f"no classical layouts tabulated for {count} parameters (depth {depth})"
            )
        if include_qnn:
            models.append(ModelDescriptor("qnn", depth=depth))
        for widths in TABLE1_CONFIGS[count]:
            for act in activations:
                models.append(
                    ModelDescriptor("mlp", hidden_widths=widths, activation=act)
                )
    return tuple(models)


def _execute_run(args) -> RunResult:
    spec, model_index, seed = args
    desc = spec.models[model_index]
    task = make_task(spec.target_kind, spec.train_points, spec.test_points)
    model = desc.build(spec.cutoff)
    try:
        result = train(model, task, spec.optimizer, seed)
    except Exception:  # noqa: BLE001 - a sweep never dies with one run
        logger.exception("run failed: %s seed=%d", desc, seed)
        result = RunResult(
            model_id=model.model_id,
            target_kind=spec.target_kind,
            strategy="",
            layer_count=model.layer_count,
            param_count=model.param_count,
            activation=model.activation,
            seed=seed,
            train_mse=float("inf"),
            test_mse=float("inf"),
            leakage_flag=False,
            runtime_seconds=0.0,
            fit_curve=(),
            diverged=True,
        )
    return with_strategy(result, spec.strategy)


def run_experiment(spec: ExperimentSpec, workers: int | None = None) -> list:
    """Train every (model, seed) pair; results in deterministic order."""
    items = [
        (spec, i, seed)
        for i in range(len(spec.models))
        for seed in spec.seed_list()
    ]
    workers = workers if workers else (os.cpu_count() or 1)
    if workers <= 1 or len(items) <= 1:
        return [_execute_run(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_execute_run, items, chunksize=1))


def run_strategy_layers(spec: ExperimentSpec, workers: int | None = None) -> list:
    if spec.strategy != "layers":
        raise ValueError(f"expected a 'layers' spec, got {spec.strategy!r}")
    return run_experiment(spec, workers)


def run_strategy_parameters(spec: ExperimentSpec, workers: int | None = None) -> list:
    if spec.strategy != "parameters":
        raise ValueError(f"expected a 'parameters' spec, got {spec.strategy!r}")
    return run_experiment(spec, workers)


@dataclass(frozen=True)
class AggregateRow:
    model_id: str
    target_kind: str
    strategy: str
    layer_count: int
    param_count: int
    activation: str
    n_seeds: int
    mean_mse: float
    std_mse: float
    min_mse: float


def aggregate(results) -> list:
    """Per-group mean / population std / min of test MSE, grouped by identity."""
    if not results:
        raise ValueError("cannot aggregate an empty result list")
    groups: dict = {}
    order = []
    for r in results:
        key = (
            r.model_id,
            r.target_kind,
            r.strategy,
            r.layer_count,
            r.param_count,
            r.activation,
        )
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(r.test_mse)
    rows = []
    for key in order:
        vals = np.asarray(groups[key], dtype=np.float64)
        rows.append(
            AggregateRow(
                *key,
                n_seeds=len(vals),
                mean_mse=float(np.mean(vals)),
                std_mse=float(np.std(vals)),
                min_mse=float(np.min(vals)),
            )
        )
    return rows


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_runs_csv(results, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RUNS_COLUMNS)
        for r in results:
            writer.writerow(
                [
                    r.model_id,
                    r.target_kind,
                    r.strategy,
                    r.layer_count,
                    r.param_count,
                    r.activation,
                    r.seed,
                    _fmt(r.train_mse),
                    _fmt(r.test_mse),
                    r.leakage_flag,
                    _fmt(r.runtime_seconds),
                ]
            )


def write_aggregates_csv(aggregates, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(AGGREGATE_COLUMNS)
        for a in aggregates:
            writer.writerow(
                [
                    a.model_id,
                    a.target_kind,
                    a.strategy,
                    a.layer_count,
                    a.param_count,
                    a.activation,
                    a.n_seeds,
                    _fmt(a.mean_mse),
                    _fmt(a.std_mse),
                    _fmt(a.min_mse),
                ]
            )


def write_curves(results, out_dir) -> list:
    """One curve file per (model, target): the run with the lowest test MSE."""
    best: dict = {}
    for r in results:
        key = (r.model_id, r.target_kind)
        if r.fit_curve and (key not in best or r.test_mse < best[key].test_mse):
            best[key] = r
    paths = []
    for (model_id, kind), r in best.items():
        curve_path = os.path.join(out_dir, f"curve_{model_id}_{kind}.csv")
        xs = np.array([p[0] for p in r.fit_curve])
        y_true = target_batch(kind, xs)
        with open(curve_path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["x", "y_pred", "y_true"])
            for (x, y_pred), yt in zip(r.fit_curve, y_true):
                writer.writerow([_fmt(x), _fmt(y_pred), _fmt(float(yt))])
        paths.append(curve_path)
    return paths


def export(results, aggregates, out_dir) -> list:
    """Write runs.csv, aggregates.csv, and a best-run curve per model/target.

    Returns the written paths. Existing files are overwritten.
    """
    os.makedirs(out_dir, exist_ok=True)
    runs_path = os.path.join(out_dir, "runs.csv")
    write_runs_csv(results, runs_path)
    agg_path = os.path.join(out_dir, "aggregates.csv")
    write_aggregates_csv(aggregates, agg_path)
    return [runs_path, agg_path] + write_curves(results, out_dir)


def read_runs_csv(path) -> list:
    """Rebuild RunResults (without curves) from runs.csv; strict about fields."""
    results = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != RUNS_COLUMNS:
            raise ValueError(f"{path}: unexpected header {header}")
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(RUNS_COLUMNS):
                raise ValueError(f"{path}: row {lineno} has {len(row)} fields")
            try:
                results.append(
                    RunResult(
                        model_id=row[0],
                        target_kind=row[1],
                        strategy=row[2],
                        layer_count=int(row[3]),
                        param_count=int(row[4]),
                        activation=row[5],
                        seed=int(row[6]),
                        train_mse=float(row[7]),
                        test_mse=float(row[8]),
                        leakage_flag=row[9] == "True",
                        runtime_seconds=float(row[10]),
                        fit_curve=(),
                    )
                )
            except ValueError as exc:
                raise ValueError(f"{path}: row {lineno}: {exc}") from exc
    return results
