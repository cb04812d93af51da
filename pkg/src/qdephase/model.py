"""Central qubit + Ising ring: parameters, Hamiltonians, initial states.

Conventions
-----------
* Tensor order is system first: ``H_S (x) I_E``.
* Spin site 0 is the most significant qubit of the environment index;
  ``|0> = |up>`` has ``sigma^z = +1``.
* The ring is closed literally, ``sigma_{N+1} = sigma_1``. For N = 1 the bond
  term is ``-J_z I``; for N = 2 the single bond is counted twice.
* The system energies ``eps0``, ``eps1`` only contribute global phases to the
  conditional propagators. ``Gamma(t)`` therefore carries the phase
  ``exp(-i (eps0 - eps1) t)``; ``|Gamma|`` does not depend on them.
"""
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DimensionMismatch
from .linalg import (
    HERMITIAN_TOL,
    eigh,
    hermiticity_error,
    kron,
    kron_all,
    max_abs,
)

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters. Energies in units of ``|J_z|``.

    ``initial_qubit`` is ``"plus"``, ``"minus"`` or a ``(theta, phi)`` pair of
    Bloch angles.
    """

    n_spins: int = 7
    j_z: float = 1.0
    h_z: float = -5.0
    g0: float = 0.5
    g1: float = 0.5
    beta: float = 1.0
    eps0: float = -0.5
    eps1: float = 0.5
    initial_qubit: object = "plus"

    def __post_init__(self):
        if int(self.n_spins) != self.n_spins or self.n_spins < 1:
            raise ValueError(f"n_spins must be a positive integer, got {self.n_spins}")
        for name in ("j_z", "h_z", "g0", "g1", "beta", "eps0", "eps1"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if not self.beta > 0:
            raise ValueError(f"beta must be positive, got {self.beta}")
        q = self.initial_qubit
        if isinstance(q, str):
            if q not in ("plus", "minus"):
                raise ValueError(f"unknown initial_qubit {q!r}")
        elif len(q) != 2 or not all(np.isfinite(q)):
            raise ValueError("custom initial_qubit must be a finite (theta, phi) pair")

    @classmethod
    def reference_regime(cls, n_spins=7, g=0.5, j_z=1.0, **kw):
        """Strong negative field ``h_z = -5|J_z|`` at ``T = |J_z|``.

        Both branches share the coupling ``g``.
        """
        return cls(
            n_spins=n_spins, j_z=j_z, h_z=-5.0 * abs(j_z), g0=g, g1=g,
            beta=1.0 / abs(j_z), **kw,
        )

    @property
    def dim_env(self):
        return 2 ** self.n_spins


def site_operator(op, site, n_spins):
    """``op`` acting on ``site`` (0-based) of an ``n_spins`` chain."""
    return kron_all(
        np.eye(2 ** site), op, np.eye(2 ** (n_spins - site - 1))
    )


def ring_sum(op, n_spins):
    return sum(site_operator(op, j, n_spins) for j in range(n_spins))


def ising_ring(n_spins, j_z, h_z):
    """``-J_z sum_j s^z_j s^z_{j+1} - h_z sum_j s^z_j`` with periodic closure."""
    zs = [site_operator(SIGMA_Z, j, n_spins) for j in range(n_spins)]
    bonds = sum(zs[j] @ zs[(j + 1) % n_spins] for j in range(n_spins))
    return -j_z * bonds - h_z * sum(zs)


@dataclass(frozen=True, eq=False)
class HamiltonianSet:
    h_s: np.ndarray
    h_e: np.ndarray
    v0: np.ndarray
    v1: np.ndarray
    h_i: np.ndarray
    h_total: np.ndarray
    h_k0: np.ndarray
    h_k1: np.ndarray
    g: tuple = field(default=(0.0, 0.0))

    @property
    def dim_env(self):
        return self.h_e.shape[0]

    @property
    def h_k(self):
        return (self.h_k0, self.h_k1)

    @cached_property
    def h_s_full(self):
        return kron(self.h_s, np.eye(self.dim_env))

    # Eigendecompositions are computed once and reused for every time sample.
    @cached_property
    def eig_k0(self):
        return eigh(self.h_k0)

    @cached_property
    def eig_k1(self):
        return eigh(self.h_k1)

    @cached_property
    def eig_total(self):
        return eigh(self.h_total)

    @cached_property
    def env_basis(self):
        """``(energies, basis)`` of ``H_E``; basis is ``None`` for the
        computational basis (used whenever ``H_E`` is exactly diagonal)."""
        h = self.h_e
        if max_abs(h - np.diag(np.diag(h))) == 0.0:
            return np.diag(h).real.copy(), None
        eig = eigh(h)
        return eig.values, eig.vectors

    def check(self):
        """Raise ``AssertionError`` if a structural invariant is broken."""
        for name in ("h_s", "h_e", "v0", "v1", "h_i", "h_total", "h_k0", "h_k1"):
            err = hermiticity_error(getattr(self, name))
            assert err <= HERMITIAN_TOL, f"{name} not Hermitian ({err:.2e})"
        assert max_abs(self.h_total - self.embedded_sum()) == 0.0
        assert max_abs(self.system_interaction_commutator()) < 1e-12
        return self

    def embedded_sum(self):
        return self.h_s_full + kron(np.eye(2), self.h_e) + self.h_i

    def system_interaction_commutator(self):
        hs = self.h_s_full
        return hs @ self.h_i - self.h_i @ hs


def build_hamiltonians(p, v0=None, v1=None):
    """Assemble every Hamiltonian of the model for parameters ``p``.

    ``v0``/``v1`` override the environment interaction operators (default
    ``sum_j sigma^x_j`` and ``sum_j sigma^y_j``).
    """
    n = p.n_spins
    d = 2 ** n
    h_e = ising_ring(n, p.j_z, p.h_z)
    v0 = ring_sum(SIGMA_X, n) if v0 is None else np.asarray(v0, dtype=complex)
    v1 = ring_sum(SIGMA_Y, n) if v1 is None else np.asarray(v1, dtype=complex)
    if v0.shape != (d, d) or v1.shape != (d, d):
        raise DimensionMismatch("interaction operators must match the environment")
    h_s = np.diag([p.eps0, p.eps1]).astype(complex)
    proj0 = np.diag([1.0, 0.0]).astype(complex)
    proj1 = np.diag([0.0, 1.0]).astype(complex)
    h_i = kron(proj0, p.g0 * v0) + kron(proj1, p.g1 * v1)
    h_total = kron(h_s, np.eye(d)) + kron(np.eye(2), h_e) + h_i
    return HamiltonianSet(
        h_s=h_s, h_e=h_e, v0=v0, v1=v1, h_i=h_i, h_total=h_total,
        h_k0=h_e + p.g0 * v0, h_k1=h_e + p.g1 * v1, g=(p.g0, p.g1),
    )


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    matrix: np.ndarray
    label: str = ""

    @property
    def dim(self):
        return self.matrix.shape[0]

    def validate(self, tol=1e-12, positivity_tol=1e-10):
        """Check Hermiticity, unit trace and positivity; return ``self``."""
        m = self.matrix
        if hermiticity_error(m) > tol:
            raise ValueError(f"{self.label or 'state'} is not Hermitian")
        if abs(np.trace(m) - 1.0) > tol:
            raise ValueError(f"{self.label or 'state'} has trace {np.trace(m)}")
        lo = eigh(m).values[0]
        if lo < -positivity_tol:
            raise ValueError(f"{self.label or 'state'} has eigenvalue {lo}")
        return self


def gibbs_state(h_e, beta):
    """Thermal state ``exp(-beta H)/Z``, shifted by the ground energy first."""
    if not beta > 0:
        raise ValueError("beta must be positive")
    eig = eigh(h_e)
    w = np.exp(-beta * (eig.values - eig.values[0]))
    rho = eig.function(lambda _: w / w.sum())
    return DensityMatrix(0.5 * (rho + rho.conj().T), "rho_E(0)").validate()


def qubit_projector(theta, phi):
    psi = np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])
    return np.outer(psi, psi.conj())


def initial_qubit_state(p):
    q = p.initial_qubit
    if q == "plus":
        m = np.full((2, 2), 0.5, dtype=complex)
    elif q == "minus":
        m = np.array([[0.5, -0.5], [-0.5, 0.5]], dtype=complex)
    else:
        m = qubit_projector(*q)
    return DensityMatrix(m, "rho_S(0)").validate()


def check_dissipation_condition(hs):
    """Per branch k, whether ``[H_E, H_k] != 0`` (relative tolerance 1e-10)."""
    out = []
    ne = max_abs(hs.h_e)
    for hk in hs.h_k:
        comm = max_abs(hs.h_e @ hk - hk @ hs.h_e)
        out.append(bool(comm > 1e-10 * ne * max_abs(hk)))
    return tuple(out)
