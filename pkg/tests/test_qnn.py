import numpy as np
import pytest
from scipy.special import factorial

from qnnbench.fock import CutoffConfig, expectation, quadrature_x_op
from qnnbench.qnn import (
    QnnLayerParams,
    QnnParams,
    encode,
    forward,
    forward_batch,
    forward_flat,
    gradient,
    jacobian_flat,
)

CFG = CutoffConfig(30)


def zero_params(n_layers):
    return QnnParams.from_flat(np.zeros(5 * n_layers))


def fd_gradient(x, flat, cfg, h=1e-5):
    """Central-difference oracle, independent of the adjoint path."""
    out = np.empty(flat.size)
    for i in range(flat.size):
        up = flat.copy()
        up[i] += h
        dn = flat.copy()
        dn[i] -= h
        f_up = forward(x, QnnParams.from_flat(up), cfg)
        f_dn = forward(x, QnnParams.from_flat(dn), cfg)
        out[i] = (f_up - f_dn) / (2 * h)
    return out


def assert_gradient_close(analytic, fd, rel=1e-4, floor=1e-7):
    for g, f in zip(analytic, fd):
        if abs(f) >= 1e-3:
            assert abs(g - f) <= rel * abs(f), (g, f)
        else:
            assert abs(g - f) <= floor, (g, f)


class TestEncode:
    def test_zero_input_is_vacuum(self):
        state = encode(0.0, CFG)
        assert abs(state[0] - 1.0) < 1e-13
        assert np.max(np.abs(state[1:])) < 1e-13

    def test_quadrature_of_encoded_input(self):
        state = encode(0.3, CFG)
        got = expectation(quadrature_x_op(CFG), state)
        assert abs(got - np.sqrt(2) * 0.3) < 1e-9

    def test_normalized(self):
        for x in (-2.0, -0.5, 0.9, 2.0):
            assert abs(np.linalg.norm(encode(x, CFG)) - 1.0) < 1e-10

    def test_poisson_tail_negligible_at_unit_input(self):
        # coherent |1.0>: |c_n|^2 = exp(-1)/n!, far below 1e-20 by n=27
        state = encode(1.0, CFG)
        assert np.sum(np.abs(state[27:]) ** 2) < 1e-20
        assert np.exp(-1.0) / factorial(27) < 1e-20  # oracle agrees the bound is sane


class TestForward:
    def test_identity_circuit_reads_sqrt2_x(self):
        for n_layers in (1, 3, 5):
            params = zero_params(n_layers)
            for x in np.linspace(-1, 1, 11):
                assert abs(forward(x, params, CFG) - np.sqrt(2) * x) < 1e-9

    def test_vacuum_fixed_by_phase_gates(self):
        # only rotations and Kerr active: vacuum stays vacuum, <X> = 0
        params = QnnParams(
            (
                QnnLayerParams(theta1=0.7, xi=0.0, theta2=-1.2, alpha=0.0, chi=0.4),
                QnnLayerParams(theta1=-0.3, xi=0.0, theta2=0.9, alpha=0.0, chi=1.1),
            )
        )
        assert abs(forward(0.0, params, CFG)) < 1e-9

    def test_displacement_only_layer_shifts_readout(self):
        params = QnnParams((QnnLayerParams(0.0, 0.0, 0.0, 0.2, 0.0),))
        assert abs(forward(0.5, params, CFG) - np.sqrt(2) * 0.7) < 1e-8

    def test_deterministic(self):
        rng = np.random.default_rng(0)
        params = QnnParams.from_flat(rng.uniform(-0.5, 0.5, 15))
        a = forward(0.37, params, CFG)
        b = forward(0.37, params, CFG)
        assert a == b

    def test_batch_matches_scalar(self):
        # single-column and multi-column matmuls may round differently, so
        # agreement is to precision, not bitwise
        rng = np.random.default_rng(1)
        params = QnnParams.from_flat(rng.uniform(-0.5, 0.5, 10))
        xs = np.linspace(-1, 1, 7)
        batch = forward_batch(xs, params, CFG)
        singles = [forward(x, params, CFG) for x in xs]
        np.testing.assert_allclose(batch, singles, atol=1e-12)

    def test_output_bounded_at_moderate_params(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            n_layers = int(rng.integers(1, 6))
            params = QnnParams.from_flat(rng.uniform(-1, 1, 5 * n_layers))
            assert abs(forward(rng.uniform(-1, 1), params, CFG)) < 20


class TestGradient:
    def test_alpha_derivative_at_origin(self):
        # with every other gate at identity, <X> = sqrt(2) (x + alpha)
        params = zero_params(1)
        grad = gradient(0.3, params, CFG)
        alpha_idx = 3
        assert abs(grad[alpha_idx] - np.sqrt(2)) < 1e-6

    def test_rotation_derivative_vanishes_on_vacuum(self):
        grad = gradient(0.0, zero_params(1), CFG)
        assert abs(grad[0]) < 1e-12

    def test_matches_finite_differences(self):
        rng = np.random.default_rng(123)
        for _ in range(20):
            n_layers = int(rng.integers(1, 4))
            flat = rng.uniform(-0.5, 0.5, 5 * n_layers)
            x = float(rng.uniform(-1, 1))
            analytic = gradient(x, QnnParams.from_flat(flat), CFG)
            assert_gradient_close(analytic, fd_gradient(x, flat, CFG))

    def test_flat_api_consistency(self):
        rng = np.random.default_rng(9)
        flat = rng.uniform(-0.4, 0.4, 15)
        xs = np.linspace(-0.8, 0.8, 5)
        params = QnnParams.from_flat(flat)
        preds, jac, leak = jacobian_flat(xs, flat, CFG)
        preds2, leak2 = forward_flat(xs, flat, CFG)
        np.testing.assert_array_equal(preds, preds2)
        assert leak == leak2
        assert 0.0 <= leak < 1.0
        for j, x in enumerate(xs):
            np.testing.assert_allclose(jac[:, j], gradient(x, params, CFG), atol=1e-12)


class TestQnnParams:
    def test_flat_roundtrip(self):
        flat = np.arange(10, dtype=float) / 10
        assert np.array_equal(QnnParams.from_flat(flat).to_flat(), flat)

    def test_param_count(self):
        assert zero_params(4).n_params == 20
        assert zero_params(4).n_layers == 4

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            QnnParams(())

    def test_rejects_bad_flat_length(self):
        with pytest.raises(ValueError):
            QnnParams.from_flat(np.zeros(7))

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError, match="finite"):
            QnnLayerParams(0.0, np.nan, 0.0, 0.0, 0.0)
