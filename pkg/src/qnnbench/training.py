"""MSE loss, Adam updates, and the full-batch training loop.

Both models train through the same loop on a flat parameter vector.
Randomness comes exclusively from numpy's default_rng (PCG64) seeded per
run, so a (seed, model, config) triple reproduces bit-identically.

Initialization: QNN parameters are drawn Normal(0, std=0.1), keeping the
initial circuit near the identity and the state near vacuum; MLP weights
are uniform on +-sqrt(1/fan_in) with zero biases, drawn layer by layer.
"""

import time
from dataclasses import dataclass, replace

import numpy as np

from . import mlp as mlp_mod
from . import qnn as qnn_mod
from .data import RegressionTask
from .fock import CutoffConfig

__all__ = [
    "AdamConfig",
    "TrainState",
    "RunResult",
    "QnnModel",
    "MlpModel",
    "mse",
    "adam_step",
    "train",
    "DIVERGENCE_LIMIT",
]

# A train MSE above this aborts the run and marks it diverged.
DIVERGENCE_LIMIT = 1e6


@dataclass(frozen=True)
class AdamConfig:
    learning_rate: float = 0.01
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    epochs: int = 10000

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ValueError(f"learning_rate must be > 0, got {self.learning_rate}")
        for name in ("beta1", "beta2"):
            v = getattr(self, name)
            if not 0 <= v < 1:
                raise ValueError(f"{name} must be in [0, 1), got {v}")
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon}")
        if self.epochs < 0:
            raise ValueError(f"epochs must be >= 0, got {self.epochs}")


@dataclass(frozen=True)
class TrainState:
    parameters: np.ndarray
    first_moment: np.ndarray
    second_moment: np.ndarray
    step_count: int = 0

    @classmethod
    def initial(cls, parameters) -> "TrainState":
        p = np.asarray(parameters, dtype=np.float64)
        return cls(p, np.zeros_like(p), np.zeros_like(p), 0)


@dataclass(frozen=True)
class RunResult:
    """Outcome of one seeded training run."""

    model_id: str
    target_kind: str
    strategy: str
    layer_count: int
    param_count: int
    activation: str
    seed: int
    train_mse: float
    test_mse: float
    leakage_flag: bool
    runtime_seconds: float
    fit_curve: tuple  # ((x, yhat), ...) on the test grid
    final_params: tuple = ()
    diverged: bool = False


def mse(predictions, targets) -> float:
    """Mean of squared residuals; rejects empty or mismatched inputs."""
    predictions = np.asarray(predictions, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64)
    if predictions.shape != targets.shape:
        raise ValueError(
            f"length mismatch: {predictions.shape} vs {targets.shape}"
        )
    if predictions.size == 0:
        raise ValueError("mse of empty vectors is undefined")
    return float(np.mean((predictions - targets) ** 2))


def adam_step(state: TrainState, gradient, cfg: AdamConfig) -> TrainState:
    """One bias-corrected Adam update; returns a new TrainState."""
    g = np.asarray(gradient, dtype=np.float64)
    if g.shape != state.parameters.shape:
        raise ValueError(
            f"gradient shape {g.shape} does not match parameters "
            f"{state.parameters.shape}"
        )
    if not np.all(np.isfinite(g)):
        bad = int(np.flatnonzero(~np.isfinite(g))[0])
        raise FloatingPointError(f"non-finite gradient component at index {bad}")
    t = state.step_count + 1
    m = cfg.beta1 * state.first_moment + (1 - cfg.beta1) * g
    v = cfg.beta2 * state.second_moment + (1 - cfg.beta2) * g * g
    m_hat = m / (1 - cfg.beta1**t)
    v_hat = v / (1 - cfg.beta2**t)
    params = state.parameters - cfg.learning_rate * m_hat / (np.sqrt(v_hat) + cfg.epsilon)
    return TrainState(params, m, v, t)


class QnnModel:
    """Flat-vector adapter around the quantum network."""

    def __init__(self, n_layers: int, cutoff: CutoffConfig = CutoffConfig()):
        if n_layers < 1:
            raise ValueError(f"n_layers must be >= 1, got {n_layers}")
        self.n_layers = n_layers
        self.cutoff = cutoff
        self.model_id = f"qnn_L{n_layers}"
        self.layer_count = n_layers
        self.param_count = qnn_mod.PARAMS_PER_LAYER * n_layers
        self.activation = "quantum"

    def init_params(self, rng) -> np.ndarray:
        return rng.normal(0.0, 0.1, size=self.param_count)

    def predict(self, xs, flat):
        return qnn_mod.forward_flat(xs, flat, self.cutoff)

    def mse_and_gradient(self, xs, ys, flat):
        preds, jac, leak = qnn_mod.jacobian_flat(xs, flat, self.cutoff)
        residuals = preds - np.asarray(ys, dtype=np.float64)
        loss = float(np.mean(residuals**2))
        grad = jac @ (2.0 * residuals / residuals.size)
        return loss, grad, leak


class MlpModel:
    """Flat-vector adapter around the classical network."""

    def __init__(self, hidden_widths, activation: str, model_id: str | None = None):
        self.template = mlp_mod.make_network(hidden_widths, activation)
        self.hidden_widths = self.template.hidden_widths
        widths = "-".join(map(str, self.hidden_widths)) or "linear"
        self.model_id = model_id or f"mlp_{activation}_{widths}"
        self.layer_count = len(self.hidden_widths) + 1
        self.param_count = self.template.n_params
        self.activation = activation

    @classmethod
    def chain(cls, depth: int, activation: str) -> "MlpModel":
        if depth < 1:
            raise ValueError(f"chain depth must be >= 1, got {depth}")
        return cls(
            (1,) * (depth - 1), activation, model_id=f"chain_{activation}_L{depth}"
        )

    def init_params(self, rng) -> np.ndarray:
        net = mlp_mod.make_network(self.hidden_widths, self.activation, rng)
        return mlp_mod.flatten_params(net)

    def predict(self, xs, flat):
        net = mlp_mod.with_params(self.template, flat)
        return mlp_mod.forward_batch(xs, net), 0.0

    def mse_and_gradient(self, xs, ys, flat):
        net = mlp_mod.with_params(self.template, flat)
        loss, grad = mlp_mod.mse_gradient_batch(xs, ys, net)
        return loss, grad, 0.0


def _safe_mse(preds, targets) -> float:
    val = mse(preds, targets)
    return val if np.isfinite(val) else float("inf")


def train(model, task: RegressionTask, cfg: AdamConfig, seed: int) -> RunResult:
    """Full-batch Adam on train MSE; returns metrics, curve, and timing.

    Divergence (train MSE above DIVERGENCE_LIMIT, or a non-finite
    gradient) stops the loop early and marks the result diverged instead
    of raising.
    """
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    state = TrainState.initial(model.init_params(rng))
    xs, ys = task.train.inputs, task.train.targets
    max_leak = 0.0
    diverged = False
    for _ in range(cfg.epochs):
        loss, grad, leak = model.mse_and_gradient(xs, ys, state.parameters)
        max_leak = max(max_leak, leak)
        if not np.isfinite(loss) or loss > DIVERGENCE_LIMIT:
            diverged = True
            break
        try:
            state = adam_step(state, grad, cfg)
        except FloatingPointError:
            diverged = True
            break

    train_preds, leak_tr = model.predict(xs, state.parameters)
    test_preds, leak_te = model.predict(task.test.inputs, state.parameters)
    max_leak = max(max_leak, leak_tr, leak_te)
    curve = tuple(
        (float(x), float(y)) for x, y in zip(task.test.inputs, test_preds)
    )
    return RunResult(
        model_id=model.model_id,
        target_kind=task.train.target_kind,
        strategy="",
        layer_count=model.layer_count,
        param_count=model.param_count,
        activation=model.activation,
        seed=seed,
        train_mse=_safe_mse(train_preds, ys),
        test_mse=_safe_mse(test_preds, task.test.targets),
        leakage_flag=max_leak > qnn_mod.LEAKAGE_THRESHOLD,
        runtime_seconds=time.perf_counter() - t0,
        fit_curve=curve,
        final_params=tuple(float(p) for p in state.parameters),
        diverged=diverged,
    )


def with_strategy(result: RunResult, strategy: str) -> RunResult:
    return replace(result, strategy=strategy)
