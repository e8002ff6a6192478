"""Truncated Fock-space linear algebra for a single bosonic mode.

States are complex128 vectors of length ``dim`` over the photon-number
basis |0>, |1>, ..., |dim-1>; operators are dense complex128 ``dim x dim``
matrices. Everything here is pure and allocation-per-call, so values can
be shared freely across processes.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "CutoffConfig",
    "annihilation_op",
    "creation_op",
    "number_op",
    "quadrature_x_op",
    "vacuum",
    "fock_state",
    "matrix_exp",
    "expectation",
    "leakage",
]

# Max-abs-entry tolerance for the anti-Hermiticity check in matrix_exp.
ANTIHERMITIAN_TOL = 1e-10
# Hermiticity / normalization tolerances for expectation().
HERMITIAN_TOL = 1e-10
NORM_TOL = 1e-6
# Imaginary residue allowed on a supposedly real expectation value.
IMAG_RESIDUE_TOL = 1e-10


@dataclass(frozen=True)
class CutoffConfig:
    """Fock-space truncation: keep levels |0> .. |dim-1>."""

    dim: int = 30

    def __post_init__(self):
        if not isinstance(self.dim, int) or self.dim < 2:
            raise ValueError(f"cutoff dim must be an integer >= 2, got {self.dim!r}")


@lru_cache(maxsize=None)
def _annihilation(dim: int) -> np.ndarray:
    a = np.zeros((dim, dim), dtype=np.complex128)
    ns = np.arange(1, dim)
    a[ns - 1, ns] = np.sqrt(ns)
    a.setflags(write=False)
    return a


def annihilation_op(cfg: CutoffConfig) -> np.ndarray:
    """Ladder-down operator: a|n> = sqrt(n)|n-1>, a|0> = 0."""
    return _annihilation(cfg.dim).copy()


def creation_op(cfg: CutoffConfig) -> np.ndarray:
    """Ladder-up operator, the conjugate transpose of annihilation_op."""
    return _annihilation(cfg.dim).conj().T.copy()


def number_op(cfg: CutoffConfig) -> np.ndarray:
    """diag(0, 1, ..., dim-1)."""
    return np.diag(np.arange(cfg.dim, dtype=np.complex128))


def quadrature_x_op(cfg: CutoffConfig) -> np.ndarray:
    """Position quadrature X = (a_dag + a) / sqrt(2); real symmetric."""
    a = _annihilation(cfg.dim)
    return ((a.conj().T + a) / np.sqrt(2.0)).copy()


def vacuum(cfg: CutoffConfig) -> np.ndarray:
    """|0> as a complex128 column of length dim."""
    return fock_state(0, cfg)


def fock_state(n: int, cfg: CutoffConfig) -> np.ndarray:
    """Basis state |n>."""
    if not 0 <= n < cfg.dim:
        raise ValueError(f"Fock level {n} outside [0, {cfg.dim})")
    psi = np.zeros(cfg.dim, dtype=np.complex128)
    psi[n] = 1.0
    return psi


def matrix_exp(generator: np.ndarray) -> np.ndarray:
    """Exponentiate an anti-Hermitian generator G, returning a unitary.

    Writes G = iH with H Hermitian, diagonalizes H, and exponentiates the
    eigenvalues, so the result is unitary to machine precision regardless
    of the norm of G. Rejects generators whose anti-Hermiticity defect
    max|G + G_dag| exceeds ANTIHERMITIAN_TOL.
    """
    g = np.asarray(generator, dtype=np.complex128)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ValueError(f"generator must be square, got shape {g.shape}")
    defect = np.max(np.abs(g + g.conj().T))
    if defect > ANTIHERMITIAN_TOL:
        raise ValueError(
            f"generator is not anti-Hermitian: max|G + G_dag| = {defect:.3e} "
            f"exceeds {ANTIHERMITIAN_TOL:.1e}"
        )
    h = -1j * g  # Hermitian up to the checked defect
    h = (h + h.conj().T) / 2.0
    w, v = np.linalg.eigh(h)
    return (v * np.exp(1j * w)) @ v.conj().T


def expectation(op: np.ndarray, state: np.ndarray) -> float:
    """<psi|op|psi> for a Hermitian op and a normalized state.

    The imaginary part is checked against IMAG_RESIDUE_TOL and discarded.
    """
    op = np.asarray(op)
    state = np.asarray(state)
    herm_defect = np.max(np.abs(op - op.conj().T))
    if herm_defect > HERMITIAN_TOL:
        raise ValueError(
            f"operator is not Hermitian: max|op - op_dag| = {herm_defect:.3e}"
        )
    nrm = np.linalg.norm(state)
    if abs(nrm - 1.0) > NORM_TOL:
        raise ValueError(f"state norm {nrm!r} differs from 1 by more than {NORM_TOL}")
    val = np.vdot(state, op @ state)
    if abs(val.imag) > IMAG_RESIDUE_TOL:
        raise ValueError(f"expectation has imaginary residue {val.imag:.3e}")
    return float(val.real)


def leakage(state: np.ndarray, levels: int = 3) -> float:
    """Population in the top ``levels`` Fock levels (truncation diagnostic).

    Accepts a single state (dim,) or a batch (dim, n); returns the max
    over the batch.
    """
    state = np.asarray(state)
    top = np.abs(state[-levels:]) ** 2
    pop = top.sum(axis=0)
    return float(np.max(pop))
