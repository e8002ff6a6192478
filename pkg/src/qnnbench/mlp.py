"""Fully connected feedforward regressor with scalar input and output.

Hidden layers apply one of tanh / sigmoid / relu; the final one-neuron
output layer is always linear. A "chain" network (one neuron per layer,
2L parameters at depth L) is the depth-matched classical counterpart of
the quantum model.
"""

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ACTIVATIONS",
    "MlpNetwork",
    "param_count",
    "make_network",
    "chain_network",
    "forward",
    "forward_batch",
    "backward",
    "mse_gradient_batch",
    "flatten_params",
    "with_params",
]

ACTIVATIONS = ("tanh", "sigmoid", "relu")


def _sigmoid(z):
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _activate(kind, z):
    if kind == "tanh":
        return np.tanh(z)
    if kind == "sigmoid":
        return _sigmoid(z)
    return np.maximum(z, 0.0)


def _activate_deriv(kind, z, a):
    # derivative w.r.t. the preactivation z; `a` is the activated value.
    if kind == "tanh":
        return 1.0 - a * a
    if kind == "sigmoid":
        return a * (1.0 - a)
    return (z > 0.0).astype(z.dtype)  # relu subgradient at 0 is 0


def _check_activation(kind: str) -> str:
    if kind not in ACTIVATIONS:
        raise ValueError(f"activation must be one of {ACTIVATIONS}, got {kind!r}")
    return kind


@dataclass
class MlpNetwork:
    """Layer widths 1 -> hidden_widths -> 1; weights[l] has shape (out, in)."""

    hidden_widths: tuple[int, ...]
    activation: str
    weights: list = field(repr=False)
    biases: list = field(repr=False)

    @property
    def n_params(self) -> int:
        return param_count(self.hidden_widths)


def param_count(hidden_widths) -> int:
    """Trainable parameters: sum of (fan_in + 1) * fan_out, output layer included.

    An empty width list is a single linear neuron: 2 parameters.
    """
    hidden_widths = tuple(int(w) for w in hidden_widths)
    if any(w < 1 for w in hidden_widths):
        raise ValueError(f"hidden widths must be >= 1, got {hidden_widths}")
    widths = (1,) + hidden_widths + (1,)
    return sum(
        (fan_in + 1) * fan_out for fan_in, fan_out in zip(widths[:-1], widths[1:])
    )


def make_network(hidden_widths, activation: str, rng=None) -> MlpNetwork:
    """Build a network; weights uniform on +-sqrt(1/fan_in) if rng given, else 0.

    Biases start at 0 either way.
    """
    hidden_widths = tuple(int(w) for w in hidden_widths)
    param_count(hidden_widths)  # validates widths
    _check_activation(activation)
    widths = (1,) + hidden_widths + (1,)
    weights, biases = [], []
    for fan_in, fan_out in zip(widths[:-1], widths[1:]):
        if rng is None:
            w = np.zeros((fan_out, fan_in))
        else:
            bound = np.sqrt(1.0 / fan_in)
            w = rng.uniform(-bound, bound, size=(fan_out, fan_in))
        weights.append(w)
        biases.append(np.zeros(fan_out))
    return MlpNetwork(hidden_widths, activation, weights, biases)


def chain_network(depth: int, activation: str, rng=None) -> MlpNetwork:
    """One neuron per layer, depth layers, exactly 2 * depth parameters.

    Layers 1..depth-1 are activated; the depth-th (output) layer is
    linear, so depth 1 is a pure linear model.
    """
    if depth < 1:
        raise ValueError(f"chain depth must be >= 1, got {depth}")
    return make_network((1,) * (depth - 1), activation, rng)


def _forward_pass(xs, net):
    """Returns (preactivations, activations) per layer for a batch of scalars."""
    a = np.asarray(xs, dtype=np.float64).reshape(1, -1)
    zs, acts = [], [a]
    last = len(net.weights) - 1
    for l, (w, b) in enumerate(zip(net.weights, net.biases)):
        z = w @ a + b[:, None]
        a = z if l == last else _activate(net.activation, z)
        zs.append(z)
        acts.append(a)
    return zs, acts


def forward_batch(xs, net: MlpNetwork) -> np.ndarray:
    _, acts = _forward_pass(xs, net)
    return acts[-1][0]


def forward(x: float, net: MlpNetwork) -> float:
    return float(forward_batch([float(x)], net)[0])


def _backprop(xs, residual_scaled, net):
    """Gradients given d loss / d output for each point, shape (N,)."""
    zs, acts = _forward_pass(xs, net)
    grads_w = [None] * len(net.weights)
    grads_b = [None] * len(net.biases)
    delta = residual_scaled.reshape(1, -1)  # output layer is linear
    for l in range(len(net.weights) - 1, -1, -1):
        grads_w[l] = delta @ acts[l].T
        grads_b[l] = delta.sum(axis=1)
        if l > 0:
            delta = (net.weights[l].T @ delta) * _activate_deriv(
                net.activation, zs[l - 1], acts[l]
            )
    return grads_w, grads_b


def backward(x: float, target: float, net: MlpNetwork):
    """Gradients of the squared error (yhat - y)^2 w.r.t. every weight and bias.

    Returns (grads_w, grads_b) shaped like net.weights / net.biases.
    """
    yhat = forward(x, net)
    scaled = np.array([2.0 * (yhat - float(target))])
    return _backprop([float(x)], scaled, net)


def mse_gradient_batch(xs, ys, net: MlpNetwork):
    """(mse, flat gradient of mse) over a full batch."""
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    preds = forward_batch(xs, net)
    residuals = preds - ys
    loss = float(np.mean(residuals**2))
    grads_w, grads_b = _backprop(xs, 2.0 * residuals / xs.size, net)
    return loss, _flatten(grads_w, grads_b)


def _flatten(weights, biases) -> np.ndarray:
    parts = []
    for w, b in zip(weights, biases):
        parts.append(np.ravel(w))
        parts.append(np.ravel(b))
    return np.concatenate(parts)


def flatten_params(net: MlpNetwork) -> np.ndarray:
    """Layer-major flat vector: weights (row-major) then biases, per layer."""
    return _flatten(net.weights, net.biases)


def with_params(net: MlpNetwork, flat) -> MlpNetwork:
    """New network with the same shape and parameters taken from `flat`."""
    flat = np.asarray(flat, dtype=np.float64)
    if flat.size != net.n_params:
        raise ValueError(f"expected {net.n_params} parameters, got {flat.size}")
    weights, biases = [], []
    i = 0
    for w, b in zip(net.weights, net.biases):
        weights.append(flat[i : i + w.size].reshape(w.shape).copy())
        i += w.size
        biases.append(flat[i : i + b.size].copy())
        i += b.size
    return MlpNetwork(net.hidden_widths, net.activation, weights, biases)
