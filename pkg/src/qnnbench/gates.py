"""Parameterized single-mode continuous-variable gates in the Fock basis.

The four constructors used by the quantum neuron:

    displacement(alpha) = exp(alpha * (a_dag - a))          alpha real
    squeeze(xi)         = exp(xi/2 * (a^2 - a_dag^2))       xi real
    rotation(theta)     = exp(i * theta * n)                (diagonal)
    kerr(chi)           = exp(i * chi * n^2)                (diagonal)

Sign convention: positive xi reduces Var(X), i.e. squeeze(r)|0> has
Var(X) = exp(-2r)/2. Displacement and squeeze are built from a cached
eigendecomposition of their (parameter-independent) generators, so
constructing a gate for a new parameter value costs two small matmuls
and is unitary to machine precision. Parameters are dimensionless reals;
|alpha|, |xi| beyond ~5 at the default cutoff 30 push population into
the truncation edge, which the leakage diagnostic reports.
"""

from functools import lru_cache

import numpy as np

from .fock import CutoffConfig, _annihilation

__all__ = [
    "displacement",
    "squeeze",
    "rotation",
    "kerr",
    "displacement_generator",
    "squeeze_generator",
]


def displacement_generator(cfg: CutoffConfig) -> np.ndarray:
    """Anti-Hermitian generator a_dag - a (per unit alpha)."""
    a = _annihilation(cfg.dim)
    return a.conj().T - a


def squeeze_generator(cfg: CutoffConfig) -> np.ndarray:
    """Anti-Hermitian generator (a^2 - a_dag^2) / 2 (per unit xi)."""
    a = _annihilation(cfg.dim)
    a2 = a @ a
    return (a2 - a2.conj().T) / 2.0


@lru_cache(maxsize=None)
def _generator_eigensystem(dim: int, which: str):
    """Eigendecomposition of H where the generator is iH, H Hermitian."""
    cfg = CutoffConfig(dim)
    gen = displacement_generator(cfg) if which == "disp" else squeeze_generator(cfg)
    h = -1j * gen
    h = (h + h.conj().T) / 2.0
    w, v = np.linalg.eigh(h)
    w.setflags(write=False)
    v.setflags(write=False)
    return w, v


def _check_finite(name: str, value: float) -> float:
    value = float(value)
    if not np.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


def displacement(alpha: float, cfg: CutoffConfig) -> np.ndarray:
    """D(alpha) for real alpha; D(alpha)|0> is the coherent state |alpha>."""
    alpha = _check_finite("alpha", alpha)
    w, v = _generator_eigensystem(cfg.dim, "disp")
    return (v * np.exp(1j * alpha * w)) @ v.conj().T


def squeeze(xi: float, cfg: CutoffConfig) -> np.ndarray:
    """S(xi) for real xi; S(r)|0> populates even Fock levels only."""
    xi = _check_finite("xi", xi)
    w, v = _generator_eigensystem(cfg.dim, "sq")
    return (v * np.exp(1j * xi * w)) @ v.conj().T


def rotation(theta: float, cfg: CutoffConfig) -> np.ndarray:
    """R(theta) = diag(exp(i*theta*n)); exactly unitary."""
    theta = _check_finite("theta", theta)
    n = np.arange(cfg.dim)
    return np.diag(np.exp(1j * theta * n))


def kerr(chi: float, cfg: CutoffConfig) -> np.ndarray:
    """K(chi) = diag(exp(i*chi*n^2)); the circuit's nonlinearity."""
    chi = _check_finite("chi", chi)
    n = np.arange(cfg.dim)
    return np.diag(np.exp(1j * chi * n.astype(np.float64) ** 2))
