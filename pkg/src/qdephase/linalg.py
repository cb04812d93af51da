"""Dense complex linear algebra used throughout the package.

Matrices are plain ``numpy`` complex arrays. Eigendecomposition is done by
our own cyclic Jacobi kernel (see :mod:`qdephase.kernels`); everything that
needs a function of a Hermitian matrix goes through :func:`eigh`.
"""
from typing import NamedTuple

import numpy as np

from . import kernels
from .errors import DimensionMismatch, NoConvergence, NotHermitian

HERMITIAN_TOL = 1e-12
JACOBI_REL_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100


class EigenDecomposition(NamedTuple):
    """Eigenvalues (ascending) and unitary eigenvector columns."""

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self):
        v = self.vectors
        return (v * self.values) @ v.conj().T

    def function(self, f):
        """Apply a scalar function to the spectrum and return ``V f(w) V^†``."""
        v = self.vectors
        return (v * f(self.values)) @ v.conj().T


def max_abs(m):
    """Largest absolute entry; the ``||.||_inf`` used for all tolerances here."""
    m = np.asarray(m)
    return float(np.abs(m).max()) if m.size else 0.0


def kron(a, b):
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def kron_all(*factors):
    out = np.ones((1, 1), dtype=complex)
    for f in factors:
        out = kron(out, f)
    return out


def _square(m, name="matrix"):
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {m.shape}")
    return m


def hermiticity_error(h):
    h = np.asarray(h)
    return max_abs(h - h.conj().T)


def eigh(h):
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Raises
    ------
    NotHermitian
        If ``max|h - h^†| > 1e-12``.
    NoConvergence
        If the off-diagonal Frobenius norm does not drop below
        ``1e-13 ||h||_F`` within 100 sweeps.
    """
    h = _square(h).astype(np.complex128, copy=False)
    err = hermiticity_error(h)
    if err > HERMITIAN_TOL:
        raise NotHermitian(f"max |h - h^dagger| = {err:.3e} exceeds {HERMITIAN_TOL}")
    if not np.all(np.isfinite(h)):
        raise NotHermitian("matrix has non-finite entries")
    h = 0.5 * (h + h.conj().T)
    fro = float(np.linalg.norm(h))
    w, v, sweeps = kernels.jacobi_hermitian(
        h, JACOBI_REL_TOL * fro, 1e-18 * fro, JACOBI_MAX_SWEEPS
    )
    if sweeps < 0:
        raise NoConvergence(f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps")
    order = np.argsort(w, kind="stable")
    return EigenDecomposition(w[order], np.ascontiguousarray(v[:, order]))


def unitary_from_eig(eig, t):
    """``exp(-i H t)`` from a precomputed decomposition of ``H``."""
    return eig.function(lambda w: np.exp(-1j * w * t))


def expm_unitary(h, t):
    """``exp(-i h t)`` for Hermitian ``h``."""
    return unitary_from_eig(eigh(h), t)


def partial_trace_env(m, dim_s, dim_e):
    """Trace out the second tensor factor of a (dim_s*dim_e)-square matrix."""
    m = _check_bipartite(m, dim_s, dim_e)
    return np.einsum("iaja->ij", m.reshape(dim_s, dim_e, dim_s, dim_e))


def partial_trace_sys(m, dim_s, dim_e):
    """Trace out the first tensor factor of a (dim_s*dim_e)-square matrix."""
    m = _check_bipartite(m, dim_s, dim_e)
    return np.einsum("aiaj->ij", m.reshape(dim_s, dim_e, dim_s, dim_e))


def _check_bipartite(m, dim_s, dim_e):
    m = _square(m)
    if m.shape[0] != dim_s * dim_e:
        raise DimensionMismatch(
            f"matrix of size {m.shape[0]} is not {dim_s} x {dim_e} bipartite"
        )
    return m


def trace_norm(m):
    """Sum of singular values.

    Hermitian input uses the eigenvalues of ``m`` directly; otherwise the
    eigenvalues of ``m^† m``.
    """
    m = _square(m).astype(np.complex128, copy=False)
    if m.shape[0] == 0:
        return 0.0
    if hermiticity_error(m) <= HERMITIAN_TOL:
        return float(np.abs(eigh(m).values).sum())
    w = eigh(m.conj().T @ m).values
    return float(np.sqrt(np.clip(w, 0.0, None)).sum())
