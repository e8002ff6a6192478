"""Single-mode continuous-variable quantum neural network.

A depth-L circuit applies, per layer, R(theta1), S(xi), R(theta2),
D(alpha), K(chi) to the encoded state D(x)|0>, and reads out <X>. Each
layer carries five trainable reals, 5L in total.

Gradients are computed by an adjoint sweep: every gate is a one-parameter
group U(p) = exp(p*A) with a fixed generator A, so dU/dp = A U and

    d<X>/dp_k = 2 Re <psi_M| X G_M ... G_{k+1} A_k |psi_k>,

evaluated by caching the forward states and back-propagating the bra.
The *_flat functions operate on a flat parameter vector (layer-major,
field order theta1, xi, theta2, alpha, chi) and a batch of inputs; they
are the training fast path. All functions are pure and deterministic.
"""

from dataclasses import dataclass
from functools import lru_cache
from math import isfinite

import numpy as np

from .fock import CutoffConfig, leakage, vacuum
from .gates import (
    _generator_eigensystem,
    displacement_generator,
    squeeze_generator,
)

__all__ = [
    "QnnLayerParams",
    "QnnParams",
    "LEAKAGE_THRESHOLD",
    "encode",
    "forward",
    "forward_batch",
    "gradient",
    "forward_flat",
    "jacobian_flat",
]

# Top-3-Fock-level population above this fraction marks a run as leaking.
LEAKAGE_THRESHOLD = 1e-4
LEAKAGE_LEVELS = 3

PARAMS_PER_LAYER = 5


@dataclass(frozen=True)
class QnnLayerParams:
    """One quantum neuron, applied as R(theta1), S(xi), R(theta2), D(alpha), K(chi)."""

    theta1: float
    xi: float
    theta2: float
    alpha: float
    chi: float

    def __post_init__(self):
        for name in ("theta1", "xi", "theta2", "alpha", "chi"):
            if not isfinite(getattr(self, name)):
                raise ValueError(f"layer parameter {name} must be finite")


@dataclass(frozen=True)
class QnnParams:
    """Full network: an ordered tuple of layers, 5 * len(layers) parameters."""

    layers: tuple[QnnLayerParams, ...]

    def __post_init__(self):
        if len(self.layers) < 1:
            raise ValueError("a QNN needs at least one layer")
        object.__setattr__(self, "layers", tuple(self.layers))

    @property
    def n_layers(self) -> int:
        return len(self.layers)

    @property
    def n_params(self) -> int:
        return PARAMS_PER_LAYER * len(self.layers)

    def to_flat(self) -> np.ndarray:
        return np.array(
            [
                v
                for lp in self.layers
                for v in (lp.theta1, lp.xi, lp.theta2, lp.alpha, lp.chi)
            ],
            dtype=np.float64,
        )

    @classmethod
    def from_flat(cls, flat) -> "QnnParams":
        flat = np.asarray(flat, dtype=np.float64)
        if flat.ndim != 1 or flat.size == 0 or flat.size % PARAMS_PER_LAYER:
            raise ValueError(
                f"flat parameter vector length must be a positive multiple of "
                f"{PARAMS_PER_LAYER}, got shape {flat.shape}"
            )
        return cls(
            tuple(QnnLayerParams(*row) for row in flat.reshape(-1, PARAMS_PER_LAYER))
        )


@lru_cache(maxsize=None)
def _x_op(dim: int):
    from .fock import quadrature_x_op

    x = quadrature_x_op(CutoffConfig(dim))
    x.setflags(write=False)
    return x


@lru_cache(maxsize=None)
def _generator_cycle(dim: int):
    """Per-gate generators in layer order; 'diag' entries are vectors."""
    cfg = CutoffConfig(dim)
    n = np.arange(dim)
    cycle = (
        ("diag", 1j * n.astype(np.complex128)),
        ("dense", squeeze_generator(cfg)),
        ("diag", 1j * n.astype(np.complex128)),
        ("dense", displacement_generator(cfg)),
        ("diag", 1j * (n * n).astype(np.complex128)),
    )
    for _, arr in cycle:
        arr.setflags(write=False)
    return cycle


def _encode_batch(xs: np.ndarray, cfg: CutoffConfig) -> np.ndarray:
    """Column i is D(xs[i])|0>; shape (dim, len(xs))."""
    w, v = _generator_eigensystem(cfg.dim, "disp")
    v0 = v.conj().T @ vacuum(cfg)
    phases = np.exp(1j * np.outer(w, xs))
    return v @ (phases * v0[:, None])


def _materialize_gates(flat: np.ndarray, cfg: CutoffConfig) -> list:
    """Dense/diagonal operators for every gate in the circuit, in order."""
    dim = cfg.dim
    n = np.arange(dim)
    wd, vd = _generator_eigensystem(dim, "disp")
    ws, vs = _generator_eigensystem(dim, "sq")
    vs_dag = vs.conj().T
    vd_dag = vd.conj().T
    ops = []
    for theta1, xi, theta2, alpha, chi in flat.reshape(-1, PARAMS_PER_LAYER):
        ops.append(("diag", np.exp(1j * theta1 * n)))
        ops.append(("dense", (vs * np.exp(1j * xi * ws)) @ vs_dag))
        ops.append(("diag", np.exp(1j * theta2 * n)))
        ops.append(("dense", (vd * np.exp(1j * alpha * wd)) @ vd_dag))
        ops.append(("diag", np.exp(1j * chi * (n * n))))
    return ops


def _check_flat(flat) -> np.ndarray:
    flat = np.asarray(flat, dtype=np.float64)
    if flat.ndim != 1 or flat.size == 0 or flat.size % PARAMS_PER_LAYER:
        raise ValueError(
            f"flat parameter vector length must be a positive multiple of "
            f"{PARAMS_PER_LAYER}, got shape {flat.shape}"
        )
    if not np.all(np.isfinite(flat)):
        raise ValueError("flat parameter vector contains non-finite entries")
    return flat


def _run_circuit(xs, flat, cfg, need_grad):
    xs = np.atleast_1d(np.asarray(xs, dtype=np.float64))
    flat = _check_flat(flat)
    ops = _materialize_gates(flat, cfg)
    psi = _encode_batch(xs, cfg)
    states = [psi]
    for kind, op in ops:
        psi = op[:, None] * psi if kind == "diag" else op @ psi
        if need_grad:
            states.append(psi)
    xpsi = _x_op(cfg.dim) @ psi
    preds = np.einsum("ni,ni->i", psi.conj(), xpsi).real
    leak = leakage(psi, LEAKAGE_LEVELS)
    if not need_grad:
        return preds, None, leak

    gens = _generator_cycle(cfg.dim)
    jac = np.empty((flat.size, xs.size))
    phi = xpsi
    for k in range(len(ops) - 1, -1, -1):
        gkind, gen = gens[k % PARAMS_PER_LAYER]
        post = states[k + 1]
        gpsi = gen[:, None] * post if gkind == "diag" else gen @ post
        jac[k] = 2.0 * np.einsum("ni,ni->i", phi.conj(), gpsi).real
        ukind, op = ops[k]
        phi = op.conj()[:, None] * phi if ukind == "diag" else op.conj().T @ phi
    return preds, jac, leak


def encode(x: float, cfg: CutoffConfig) -> np.ndarray:
    """Prepare D(x)|0>, the coherent-state encoding of a real input.

    Inputs with |x| much beyond 2 at the default cutoff push population
    toward the truncation edge; consult the leakage diagnostic there.
    """
    return _encode_batch(np.array([float(x)]), cfg)[:, 0]


def forward(x: float, params: QnnParams, cfg: CutoffConfig) -> float:
    """<X> of the circuit output for a single input."""
    preds, _, _ = _run_circuit([float(x)], params.to_flat(), cfg, need_grad=False)
    return float(preds[0])


def forward_batch(xs, params: QnnParams, cfg: CutoffConfig) -> np.ndarray:
    """Vectorized forward over a batch of inputs."""
    preds, _, _ = _run_circuit(xs, params.to_flat(), cfg, need_grad=False)
    return preds


def gradient(x: float, params: QnnParams, cfg: CutoffConfig) -> np.ndarray:
    """d<X>/dp for every trainable parameter, via the adjoint sweep.

    Ordering matches QnnParams.to_flat().
    """
    _, jac, _ = _run_circuit([float(x)], params.to_flat(), cfg, need_grad=True)
    return jac[:, 0]


def forward_flat(xs, flat, cfg: CutoffConfig):
    """Training fast path: (predictions, max leakage) for a flat vector."""
    preds, _, leak = _run_circuit(xs, flat, cfg, need_grad=False)
    return preds, leak


def jacobian_flat(xs, flat, cfg: CutoffConfig):
    """Training fast path: (predictions, d preds/d params of shape (P, N), max leakage)."""
    return _run_circuit(xs, flat, cfg, need_grad=True)
