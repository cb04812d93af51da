"""Exact pure-dephasing evolution.

Two independent routes are provided. The block route builds the conditional
environment propagators ``omega_k(t) = exp(-i eps_k t) exp(-i H_k t)`` and
never touches the joint Hamiltonian. The oracle route exponentiates the full
``H_total`` and evolves the joint state directly.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .linalg import (
    kron,
    max_abs,
    partial_trace_env,
    partial_trace_sys,
    unitary_from_eig,
)
from .model import DensityMatrix

PROJECTORS = (
    np.diag([1.0, 0.0]).astype(complex),
    np.diag([0.0, 1.0]).astype(complex),
)


@dataclass(frozen=True, eq=False)
class ConditionalPropagator:
    t: float
    omega0: np.ndarray
    omega1: np.ndarray

    @property
    def omegas(self):
        return (self.omega0, self.omega1)


@dataclass(frozen=True)
class CoherenceSample:
    t: float
    gamma: complex
    c_l1: float


def propagators(hs, p, t):
    """Conditional propagators at time ``t`` (cached eigenbases of ``H_k``)."""
    t = float(t)
    if not np.isfinite(t):
        raise ValueError("t must be finite")
    w0 = np.exp(-1j * p.eps0 * t) * unitary_from_eig(hs.eig_k0, t)
    w1 = np.exp(-1j * p.eps1 * t) * unitary_from_eig(hs.eig_k1, t)
    return ConditionalPropagator(t, w0, w1)


def _matrix(rho):
    return rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)


def _times_state(w, rho):
    """``w @ rho``, as a column scaling when ``rho`` is diagonal."""
    diag = np.diag(rho)
    if np.count_nonzero(rho) == np.count_nonzero(diag):
        return w * diag
    return w @ rho


def _check_env(cp, rho_e0):
    d = cp.omega0.shape[0]
    if rho_e0.shape != (d, d):
        raise DimensionMismatch(
            f"environment state is {rho_e0.shape}, propagators are {d}x{d}"
        )


def coherence_function(cp, rho_e0, k=0, j=1):
    """``Gamma_{k,j}(t) = tr[omega_k rho_E(0) omega_j^†]``."""
    rho = _matrix(rho_e0)
    _check_env(cp, rho)
    wk, wj = cp.omegas[k], cp.omegas[j]
    return complex(np.vdot(wj, _times_state(wk, rho)))


def coherence(cp, rho_e0, rho_s0):
    rs = _matrix(rho_s0)
    if rs.shape != (2, 2):
        raise DimensionMismatch("system state must be 2x2")
    gamma = coherence_function(cp, rho_e0, 0, 1)
    # l1 norm: sum over k != j of |rho_kj(0)| |Gamma_kj|, and |Gamma_10| = |Gamma_01|
    c_l1 = 2.0 * abs(rs[0, 1]) * abs(gamma)
    return CoherenceSample(cp.t, gamma, c_l1)


def reduced_system_state(sample, rho_s0):
    rs = _matrix(rho_s0)
    m = rs.astype(complex, copy=True)
    m[0, 1] = rs[0, 1] * sample.gamma
    m[1, 0] = rs[1, 0] * np.conj(sample.gamma)
    return DensityMatrix(m, f"rho_S({sample.t:g})")


def reduced_env_state(cp, rho_e0, rho_s0):
    """``rho_E(t) = sum_k rho_S^{kk}(0) omega_k rho_E(0) omega_k^†``."""
    rho = _matrix(rho_e0)
    rs = _matrix(rho_s0)
    _check_env(cp, rho)
    out = np.zeros_like(rho, dtype=complex)
    for k, w in enumerate(cp.omegas):
        pk = rs[k, k].real
        if pk != 0.0:
            out += pk * (_times_state(w, rho) @ w.conj().T)
    return DensityMatrix(out, f"rho_E({cp.t:g})")


def block_unitary(cp):
    """``sum_k |k><k| (x) omega_k``."""
    return kron(PROJECTORS[0], cp.omega0) + kron(PROJECTORS[1], cp.omega1)


def joint_state(cp, rho_s0, rho_e0):
    """Joint state assembled block by block from the conditional propagators."""
    rs = _matrix(rho_s0)
    rho = _matrix(rho_e0)
    _check_env(cp, rho)
    d = rho.shape[0]
    out = np.empty((2 * d, 2 * d), dtype=complex)
    left = [_times_state(w, rho) for w in cp.omegas]
    for k in range(2):
        for j in range(k, 2):
            blk = rs[k, j] * (left[k] @ cp.omegas[j].conj().T)
            out[k * d:(k + 1) * d, j * d:(j + 1) * d] = blk
            if j != k:
                out[j * d:(j + 1) * d, k * d:(k + 1) * d] = blk.conj().T
    return DensityMatrix(out, f"rho_SE({cp.t:g})")


def product_state(rho_s0, rho_e0):
    return DensityMatrix(kron(_matrix(rho_s0), _matrix(rho_e0)), "rho_SE(0)")


def full_unitary(hs, t):
    return unitary_from_eig(hs.eig_total, float(t))


def joint_oracle_state(hs, rho_s0, rho_e0, t):
    """Joint state from ``exp(-i H_total t)``; shares nothing with the block route."""
    u = full_unitary(hs, t)
    rho0 = product_state(rho_s0, rho_e0).matrix
    return DensityMatrix(u @ rho0 @ u.conj().T, f"rho_SE({float(t):g}) oracle")


def block_equivalence(hs, p, t):
    """``max|exp(-i H_total t) - sum_k |k><k| (x) omega_k(t)|``."""
    return max_abs(full_unitary(hs, t) - block_unitary(propagators(hs, p, t)))


def oracle_deviation(hs, p, rho_s0, rho_e0, t):
    """Entrywise disagreement of reduced states between the two routes.

    Returns ``(system, environment)`` maximum absolute deviations.
    """
    d = hs.dim_env
    joint = joint_oracle_state(hs, rho_s0, rho_e0, t).matrix
    cp = propagators(hs, p, t)
    rs_block = reduced_system_state(coherence(cp, rho_e0, rho_s0), rho_s0).matrix
    re_block = reduced_env_state(cp, rho_e0, rho_s0).matrix
    return (
        max_abs(partial_trace_env(joint, 2, d) - rs_block),
        max_abs(partial_trace_sys(joint, 2, d) - re_block),
    )
