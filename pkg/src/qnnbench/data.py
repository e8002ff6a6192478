"""Train/test sets for the two regression targets on [-1, 1].

Targets: sine -> sin(pi*x); heaviside -> 0 for x<0, 1 for x>=0. Grids
are uniform with inclusive endpoints, so the 20-point training grid is
symmetric about (and excludes) x=0.
"""

import csv
from dataclasses import dataclass

import numpy as np

__all__ = [
    "TARGET_KINDS",
    "Dataset",
    "RegressionTask",
    "uniform_grid",
    "target",
    "target_batch",
    "make_dataset",
    "make_task",
    "dataset_to_csv",
]

TARGET_KINDS = ("sine", "heaviside")


@dataclass(frozen=True)
class Dataset:
    inputs: np.ndarray
    targets: np.ndarray
    target_kind: str

    def __post_init__(self):
        inputs = np.asarray(self.inputs, dtype=np.float64)
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(
            self, "targets", np.asarray(self.targets, dtype=np.float64)
        )
        if self.target_kind not in TARGET_KINDS:
            raise ValueError(f"unknown target kind {self.target_kind!r}")
        if self.inputs.shape != self.targets.shape or self.inputs.ndim != 1:
            raise ValueError("inputs and targets must be 1-d and the same length")
        if np.any(np.diff(inputs) <= 0):
            raise ValueError("inputs must be strictly increasing")
        if inputs.size and (inputs[0] < -1.0 or inputs[-1] > 1.0):
            raise ValueError("inputs must lie within [-1, 1]")

    def __len__(self) -> int:
        return int(self.inputs.size)


@dataclass(frozen=True)
class RegressionTask:
    train: Dataset
    test: Dataset


def uniform_grid(n: int) -> np.ndarray:
    """n evenly spaced points on [-1, 1], endpoints inclusive."""
    if n < 2:
        raise ValueError(f"grid needs at least 2 points, got {n}")
    return np.linspace(-1.0, 1.0, n)


def target(kind: str, x: float) -> float:
    if kind == "sine":
        return float(np.sin(np.pi * x))
    if kind == "heaviside":
        return 0.0 if x < 0 else 1.0
    raise ValueError(f"unknown target kind {kind!r}")


def target_batch(kind: str, xs) -> np.ndarray:
    xs = np.asarray(xs, dtype=np.float64)
    if kind == "sine":
        return np.sin(np.pi * xs)
    if kind == "heaviside":
        return np.where(xs < 0, 0.0, 1.0)
    raise ValueError(f"unknown target kind {kind!r}")


def make_dataset(kind: str, n: int) -> Dataset:
    xs = uniform_grid(n)
    return Dataset(xs, target_batch(kind, xs), kind)


def make_task(kind: str, n_train: int = 20, n_test: int = 200) -> RegressionTask:
    return RegressionTask(make_dataset(kind, n_train), make_dataset(kind, n_test))


def dataset_to_csv(dataset: Dataset, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x", "y"])
        for x, y in zip(dataset.inputs, dataset.targets):
            writer.writerow([repr(float(x)), repr(float(y))])
