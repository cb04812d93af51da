"""Two-point-measurement energetics of the dephasing model.

Heat is the change of ``<H_E>``; work is minus the change of ``<H_I>``. The
coherent energy is evaluated from transition probabilities between
environment eigenstates, a route that never forms ``rho_E(t)`` or a trace
with ``H_E``, so that ``<Q> = C(t)`` is checked rather than assumed.
"""
from dataclasses import dataclass

import numpy as np

from . import kernels
from .dynamics import (
    _matrix,
    joint_state,
    product_state,
    reduced_env_state,
    reduced_system_state,
    coherence,
)
from .errors import ConsistencyError, NonRealExpectation

IMAG_TOL = 1e-8
IDENTITY_TOL = 1e-9


def expectation(op, rho):
    """``tr[op rho]`` for Hermitian ``op``; raises if it is not real."""
    # tr[A B] = vdot(A^†, B) and A^† = A
    val = np.vdot(np.asarray(op), _matrix(rho))
    if abs(val.imag) > IMAG_TOL:
        raise NonRealExpectation(f"imaginary part {val.imag:.3e} exceeds {IMAG_TOL}")
    return float(val.real)


def mean_heat(rho_e_t, rho_e_0, h_e):
    """``<Q> = tr[H_E rho_E(t)] - tr[H_E rho_E(0)]``."""
    return expectation(h_e, rho_e_t) - expectation(h_e, rho_e_0)


def mean_work(joint_t, joint_0, h_i):
    """``<W> = -(tr[H_I rho(t)] - tr[H_I rho(0)])``."""
    return -(expectation(h_i, joint_t) - expectation(h_i, joint_0))


@dataclass(frozen=True, eq=False)
class AmplitudeTable:
    """``probs[k, m, n] = |<r_n| omega_k(t) |r_m>|^2``."""

    t: float
    probs: np.ndarray

    def row_sums(self):
        return self.probs.sum(axis=2)


def _eigenbasis_propagators(hs, cp):
    _, basis = hs.env_basis
    if basis is None:
        return cp.omegas
    return tuple(basis.conj().T @ w @ basis for w in cp.omegas)


def _eigenbasis_populations(hs, rho_e0):
    _, basis = hs.env_basis
    rho = _matrix(rho_e0)
    if basis is None:
        return np.diag(rho).real.copy()
    return np.einsum("im,ij,jm->m", basis.conj(), rho, basis).real


def coherent_energy_amplitudes(hs, cp, rho_s0, rho_e0, table=True):
    """Finite-time coherent energy from transition probabilities.

    ``C(t) = sum_k rho_S^{kk} sum_{m,n} rho_E^m E_n (|c^k_{mn}(t)|^2 - delta_mn)``

    Returns ``(AmplitudeTable or None, C)``; pass ``table=False`` to skip
    materialising the probability table.
    """
    energies, _ = hs.env_basis
    pops = _eigenbasis_populations(hs, rho_e0)
    rs = _matrix(rho_s0)
    omegas = _eigenbasis_propagators(hs, cp)
    c = 0.0
    for k, w in enumerate(omegas):
        pk = rs[k, k].real
        if pk != 0.0:
            c += pk * kernels.amplitude_energy_shift(w, pops, energies)
    amps = None
    if table:
        # c^k_{m,n} = <r_n|omega_k|r_m> = omega_k[n, m]
        probs = np.stack([np.abs(w.T) ** 2 for w in omegas])
        amps = AmplitudeTable(cp.t, probs)
    return amps, float(c)


@dataclass(frozen=True)
class ThermoRecord:
    t: float
    q_mean: float
    w_mean: float
    c_coherent: float
    u_s_delta: float
    u_total_delta: float
    h_i_final: float
    identity_residual: float


def thermo_record(hs, cp, rho_s0, rho_e0, joint_0=None):
    """All TPM energetics at the time of ``cp``."""
    if joint_0 is None:
        joint_0 = product_state(rho_s0, rho_e0)
    rho_e_t = reduced_env_state(cp, rho_e0, rho_s0)
    joint_t = joint_state(cp, rho_s0, rho_e0)
    q = mean_heat(rho_e_t, rho_e0, hs.h_e)
    w = mean_work(joint_t, joint_0, hs.h_i)
    _, c = coherent_energy_amplitudes(hs, cp, rho_s0, rho_e0, table=False)
    h_s_full = hs.h_s_full
    du_s = expectation(h_s_full, joint_t) - expectation(h_s_full, joint_0)
    du_tot = expectation(hs.h_total, joint_t) - expectation(hs.h_total, joint_0)
    return ThermoRecord(
        t=cp.t, q_mean=q, w_mean=w, c_coherent=c, u_s_delta=du_s,
        u_total_delta=du_tot, h_i_final=expectation(hs.h_i, joint_t),
        identity_residual=abs(q - c),
    )


@dataclass(frozen=True, eq=False)
class FirstLawTerms:
    """Finite-time pieces of the reformulated first law along a time grid.

    ``classical_work``: sum_n int P_n dE_n over the grid.
    ``classical_heat``: sum_{k,m} int eps^k_m d(rho_S^kk rho_E^m).
    ``interaction_work``: per-sample sum_{k,m} rho_S^kk rho_E^m (eps^k_m(t) - eps^k_m(0)).
    ``internal_energy``: per-sample change of ``<H_E>`` (the mean heat).
    """

    times: np.ndarray
    classical_work: float
    classical_heat: float
    interaction_work: np.ndarray
    internal_energy: np.ndarray


def first_law_terms(hs, cps, rho_s0, rho_e0, tol=IDENTITY_TOL):
    """Evaluate the classical work/heat terms and the interaction term.

    ``cps`` is a sequence of conditional propagators on an increasing grid
    whose first time is 0. Raises ``ConsistencyError`` if a classical term is
    nonzero or the interaction term differs from the internal-energy change.
    """
    cps = list(cps)
    if not cps or cps[0].t != 0.0:
        raise ValueError("time grid must start at t = 0")
    _, basis = hs.env_basis
    h_e = hs.h_e
    pops_e = _eigenbasis_populations(hs, rho_e0)

    levels, p_env, pop_products, rotated, du_e = [], [], [], [], []
    for cp in cps:
        # environment level energies and populations at this time
        h_rot = h_e if basis is None else basis.conj().T @ h_e @ basis
        levels.append(np.diag(h_rot).real)
        rho_e_t = reduced_env_state(cp, rho_e0, rho_s0)
        p_env.append(_eigenbasis_populations(hs, rho_e_t))
        rho_s_t = reduced_system_state(coherence(cp, rho_e0, rho_s0), rho_s0).matrix
        pop_products.append(np.outer(np.diag(rho_s_t).real, pops_e))
        # eps^k_m(t) = <r_m| omega_k^† H_E omega_k |r_m>
        omegas = _eigenbasis_propagators(hs, cp)
        rotated.append(np.array([np.diag(w.conj().T @ h_rot @ w).real for w in omegas]))
        du_e.append(mean_heat(rho_e_t, rho_e0, h_e))

    levels, p_env = np.array(levels), np.array(p_env)
    pop_products, rotated = np.array(pop_products), np.array(rotated)
    mid_p = 0.5 * (p_env[1:] + p_env[:-1])
    w_classical = float(np.sum(mid_p * np.diff(levels, axis=0)))
    mid_eps = 0.5 * (rotated[1:] + rotated[:-1])
    q_classical = float(np.sum(mid_eps * np.diff(pop_products, axis=0)))
    w_interaction = np.einsum("km,tkm->t", pop_products[0], rotated - rotated[0])
    du_e = np.array(du_e)

    if w_classical != 0.0 or q_classical != 0.0:
        raise ConsistencyError(
            f"classical terms nonzero: dW={w_classical:.3e}, dQ={q_classical:.3e}"
        )
    scale = max(1.0, float(np.abs(du_e).max()))
    gap = float(np.abs(w_interaction - du_e).max())
    if gap > tol * scale:
        raise ConsistencyError(f"interaction work differs from dU_E by {gap:.3e}")
    return FirstLawTerms(
        np.array([cp.t for cp in cps]), w_classical, q_classical, w_interaction, du_e
    )
