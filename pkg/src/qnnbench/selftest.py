"""Fast self-contained sanity checks with closed-form expectations.

Each check compares simulator output against an analytic value (coherent
and squeezed-state moments, gate unitarity, finite-difference gradient
agreement, width-layout parameter counts). The whole suite runs in a few
seconds and backs the `qnnbench selftest` command.
"""

from dataclasses import dataclass

import numpy as np

from . import mlp as mlp_mod
from . import qnn as qnn_mod
from .fock import CutoffConfig, expectation, number_op, quadrature_x_op, vacuum
from .gates import displacement, kerr, rotation, squeeze
from .harness import TABLE1_CONFIGS

__all__ = ["CheckResult", "check_names", "run_checks"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _check_gate_unitarity(cfg: CutoffConfig) -> CheckResult:
    rng = np.random.default_rng(1234)
    worst = 0.0
    eye = np.eye(cfg.dim)
    for _ in range(100):
        which = rng.integers(4)
        if which == 0:
            u = displacement(rng.uniform(-1, 1), cfg)
        elif which == 1:
            u = squeeze(rng.uniform(-1, 1), cfg)
        elif which == 2:
            u = rotation(rng.uniform(-np.pi, np.pi), cfg)
        else:
            u = kerr(rng.uniform(-np.pi, np.pi), cfg)
        worst = max(worst, np.max(np.abs(u.conj().T @ u - eye)))
    return CheckResult(
        "gate_unitarity", worst < 1e-12, f"max |U_dag U - I| = {worst:.2e}"
    )


def _check_coherent_mean_photon(cfg: CutoffConfig) -> CheckResult:
    n_op = number_op(cfg)
    worst = 0.0
    for alpha in (0.1, 0.5, 1.0):
        state = displacement(alpha, cfg) @ vacuum(cfg)
        worst = max(worst, abs(expectation(n_op, state) - alpha**2))
    return CheckResult(
        "coherent_mean_photon", worst < 1e-6, f"max |<n> - alpha^2| = {worst:.2e}"
    )


def _check_encode_quadrature(cfg: CutoffConfig) -> CheckResult:
    x_op = quadrature_x_op(cfg)
    worst = 0.0
    for x in np.linspace(-1.0, 1.0, 11):
        state = qnn_mod.encode(x, cfg)
        worst = max(worst, abs(expectation(x_op, state) - np.sqrt(2.0) * x))
    return CheckResult(
        "encode_quadrature", worst < 1e-9, f"max |<X> - sqrt(2) x| = {worst:.2e}"
    )


def _check_squeezed_variance(cfg: CutoffConfig) -> CheckResult:
    # r capped at 0.5: beyond that the squeezed tail reaches the default
    # 30-level cutoff and the analytic value is no longer representable to
    # 1e-6 (best case ~4e-6 at r=0.75), so larger r cannot serve as an oracle
    x_op = quadrature_x_op(cfg)
    x2_op = x_op @ x_op
    worst = 0.0
    for r in (0.1, 0.5):
        state = squeeze(r, cfg) @ vacuum(cfg)
        var = expectation(x2_op, state) - expectation(x_op, state) ** 2
        worst = max(worst, abs(var - np.exp(-2.0 * r) / 2.0))
    return CheckResult(
        "squeezed_variance", worst < 1e-6, f"max |Var(X) - e^-2r/2| = {worst:.2e}"
    )


def _grad_mismatch(analytic, fd, rel, floor) -> float:
    """Worst violation ratio (>1 means out of tolerance)."""
    worst = 0.0
    for g, f in zip(analytic, fd):
        tol = rel * abs(f) if abs(f) >= 1e-3 else floor
        worst = max(worst, abs(g - f) / tol)
    return worst


def _check_qnn_gradient(cfg: CutoffConfig) -> CheckResult:
    rng = np.random.default_rng(99)
    h = 1e-5
    worst = 0.0
    for _ in range(5):
        n_layers = int(rng.integers(1, 4))
        flat = rng.uniform(-0.5, 0.5, size=5 * n_layers)
        x = rng.uniform(-1, 1)
        params = qnn_mod.QnnParams.from_flat(flat)
        analytic = qnn_mod.gradient(x, params, cfg)
        fd = np.empty_like(flat)
        for i in range(flat.size):
            stepped = flat.copy()
            stepped[i] = flat[i] + h
            up = qnn_mod.forward(x, qnn_mod.QnnParams.from_flat(stepped), cfg)
            stepped[i] = flat[i] - h
            dn = qnn_mod.forward(x, qnn_mod.QnnParams.from_flat(stepped), cfg)
            fd[i] = (up - dn) / (2 * h)
        worst = max(worst, _grad_mismatch(analytic, fd, rel=1e-4, floor=1e-7))
    return CheckResult(
        "qnn_gradient", worst < 1.0, f"worst tolerance ratio = {worst:.3f}"
    )


def _check_mlp_gradient(cfg: CutoffConfig) -> CheckResult:
    rng = np.random.default_rng(7)
    h = 1e-6
    worst = 0.0
    for act in mlp_mod.ACTIVATIONS:
        for _ in range(3):
            widths = tuple(rng.integers(1, 5, size=rng.integers(1, 3)))
            net = mlp_mod.make_network(widths, act)
            # fully random weights AND biases: zero biases would park relu
            # preactivations exactly on the kink, where finite differences
            # and the subgradient convention disagree
            net = mlp_mod.with_params(net, rng.uniform(-1, 1, net.n_params))
            x = float(rng.uniform(-1, 1))
            y = float(rng.uniform(-1, 1))
            gw, gb = mlp_mod.backward(x, y, net)
            analytic = mlp_mod._flatten(gw, gb)
            flat = mlp_mod.flatten_params(net)
            fd = np.empty_like(flat)
            for i in range(flat.size):
                stepped = flat.copy()
                stepped[i] += h
                up = (mlp_mod.forward(x, mlp_mod.with_params(net, stepped)) - y) ** 2
                stepped[i] -= 2 * h
                dn = (mlp_mod.forward(x, mlp_mod.with_params(net, stepped)) - y) ** 2
                fd[i] = (up - dn) / (2 * h)
            worst = max(worst, _grad_mismatch(analytic, fd, rel=1e-5, floor=1e-8))
    return CheckResult(
        "mlp_gradient", worst < 1.0, f"worst tolerance ratio = {worst:.3f}"
    )


def _check_table1_param_counts(cfg: CutoffConfig) -> CheckResult:
    bad = []
    for count, layouts in TABLE1_CONFIGS.items():
        for widths in layouts:
            got = mlp_mod.param_count(widths)
            if got != count:
                bad.append(f"{widths} -> {got} (want {count})")
    for depth in range(1, 6):
        got = qnn_mod.QnnParams.from_flat(np.zeros(5 * depth)).n_params
        if got != 5 * depth:
            bad.append(f"qnn depth {depth} -> {got} (want {5 * depth})")
    detail = "; ".join(bad) if bad else "all 14 layouts and qnn depths 1..5 match"
    return CheckResult("table1_param_counts", not bad, detail)


def _check_qnn_identity(cfg: CutoffConfig) -> CheckResult:
    params = qnn_mod.QnnParams.from_flat(np.zeros(15))
    worst = 0.0
    for x in np.linspace(-1.0, 1.0, 7):
        worst = max(
            worst, abs(qnn_mod.forward(x, params, cfg) - np.sqrt(2.0) * x)
        )
    return CheckResult(
        "qnn_identity", worst < 1e-9, f"max |<X> - sqrt(2) x| = {worst:.2e}"
    )


_CHECKS = (
    _check_gate_unitarity,
    _check_coherent_mean_photon,
    _check_encode_quadrature,
    _check_squeezed_variance,
    _check_qnn_identity,
    _check_qnn_gradient,
    _check_mlp_gradient,
    _check_table1_param_counts,
)


def check_names() -> list:
    return [fn.__name__.removeprefix("_check_") for fn in _CHECKS]


def run_checks(cutoff_dim: int = 30) -> list:
    cfg = CutoffConfig(cutoff_dim)
    return [fn(cfg) for fn in _CHECKS]
