import numpy as np
import pytest
from scipy.linalg import expm

from qdephase.dynamics import (
    block_equivalence,
    coherence,
    coherence_function,
    joint_oracle_state,
    joint_state,
    product_state,
    propagators,
    reduced_env_state,
    reduced_system_state,
    CoherenceSample,
)
from qdephase.errors import DimensionMismatch
from qdephase.linalg import max_abs, partial_trace_env, partial_trace_sys
from qdephase.model import ModelParams, build_hamiltonians, gibbs_state, initial_qubit_state


def setup(n=3, g=0.5, **kw):
    p = ModelParams.reference_regime(n, g, **kw)
    hs = build_hamiltonians(p)
    return p, hs, initial_qubit_state(p), gibbs_state(hs.h_e, p.beta)


# Gamma(t) for N=3, g=0.5, plus state, from scipy.linalg.expm on H_total
REFERENCE_GAMMA = {
    0.5: 0.8750111020350385 + 0.4801271559534104j,
    1.0: 0.5312078459389377 + 0.8393480366585884j,
    2.0: -0.42342750145922026 + 0.8894846907096535j,
}


class TestPropagators:
    def test_zero_time(self):
        p, hs, _, _ = setup()
        cp = propagators(hs, p, 0.0)
        np.testing.assert_allclose(cp.omega0, np.eye(8), atol=1e-14)
        np.testing.assert_allclose(cp.omega1, np.eye(8), atol=1e-14)

    def test_commuting_limit(self):
        p, hs, _, _ = setup(g=0.0)
        t = 1.7
        cp = propagators(hs, p, t)
        np.testing.assert_allclose(cp.omega0, np.exp(-1j * p.eps0 * t) * expm(-1j * t * hs.h_e), atol=1e-12)
        np.testing.assert_allclose(
            cp.omega0 @ cp.omega1.conj().T, np.exp(-1j * (p.eps0 - p.eps1) * t) * np.eye(8), atol=1e-12
        )

    def test_unitary_and_matches_expm(self):
        p, hs, _, _ = setup()
        cp = propagators(hs, p, 1.0)
        for k, w in enumerate(cp.omegas):
            assert max_abs(w.conj().T @ w - np.eye(8)) < 1e-10
            eps = (p.eps0, p.eps1)[k]
            np.testing.assert_allclose(w, np.exp(-1j * eps) * expm(-1j * hs.h_k[k]), atol=1e-12)

    def test_non_finite_time(self):
        p, hs, _, _ = setup()
        with pytest.raises(ValueError):
            propagators(hs, p, np.nan)


class TestCoherence:
    @pytest.mark.parametrize("t", [0.0, 0.9, 3.3])
    def test_diagonal_factor_is_one(self, t):
        p, hs, _, re = setup()
        cp = propagators(hs, p, t)
        for k in (0, 1):
            assert coherence_function(cp, re, k, k) == pytest.approx(1.0, abs=1e-10)

    def test_zero_coupling_keeps_modulus(self):
        p, hs, rs, re = setup(g=0.0)
        for t in np.linspace(0, 20, 7):
            assert abs(coherence(propagators(hs, p, t), re, rs).gamma) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("t", sorted(REFERENCE_GAMMA))
    def test_reference_values(self, t):
        p, hs, rs, re = setup()
        s = coherence(propagators(hs, p, t), re, rs)
        assert abs(s.gamma - REFERENCE_GAMMA[t]) < 1e-10
        assert s.c_l1 == pytest.approx(abs(REFERENCE_GAMMA[t]), abs=1e-10)

    def test_modulus_bounded(self):
        p, hs, rs, re = setup(n=4, g=1.3)
        for t in np.linspace(0, 10, 11):
            assert abs(coherence(propagators(hs, p, t), re, rs).gamma) <= 1 + 1e-10

    def test_phase_from_system_energies(self):
        p, hs, rs, re = setup()
        q = ModelParams.reference_regime(3, 0.5, eps0=0.0, eps1=0.0)
        a = coherence(propagators(hs, p, 1.3), re, rs).gamma
        b = coherence(propagators(hs, q, 1.3), re, rs).gamma
        assert a == pytest.approx(b * np.exp(-1j * (p.eps0 - p.eps1) * 1.3), abs=1e-12)

    def test_dimension_checks(self):
        p, hs, rs, _ = setup()
        cp = propagators(hs, p, 1.0)
        with pytest.raises(DimensionMismatch):
            coherence(cp, np.eye(4) / 4, rs)
        with pytest.raises(DimensionMismatch):
            coherence(cp, np.eye(8) / 8, np.eye(3) / 3)


class TestReducedStates:
    def test_system_limits(self):
        rs = np.full((2, 2), 0.5, dtype=complex)
        np.testing.assert_array_equal(reduced_system_state(CoherenceSample(0.0, 1.0, 1.0), rs).matrix, rs)
        np.testing.assert_array_equal(
            reduced_system_state(CoherenceSample(1.0, 0.0, 0.0), rs).matrix, np.eye(2) / 2
        )

    def test_system_populations_unchanged(self):
        p, hs, rs, re = setup()
        for t in (0.4, 2.5, 11.0):
            m = reduced_system_state(coherence(propagators(hs, p, t), re, rs), rs).matrix
            np.testing.assert_array_equal(np.diag(m), np.diag(rs.matrix))

    def test_env_at_zero(self):
        p, hs, rs, re = setup()
        np.testing.assert_allclose(reduced_env_state(propagators(hs, p, 0.0), re, rs).matrix, re.matrix, atol=1e-14)

    def test_env_single_branch(self):
        p, hs, _, re = setup()
        cp = propagators(hs, p, 1.4)
        ground = np.diag([1.0, 0.0]).astype(complex)
        expected = cp.omega0 @ re.matrix @ cp.omega0.conj().T
        np.testing.assert_allclose(reduced_env_state(cp, re, ground).matrix, expected, atol=1e-14)

    def test_env_valid_state(self):
        p, hs, rs, re = setup(n=4)
        rho = reduced_env_state(propagators(hs, p, 2.2), re, rs)
        assert abs(np.trace(rho.matrix) - 1) < 1e-10
        rho.validate(tol=1e-10)

    @pytest.mark.parametrize("t", [0.37, 4.1, 13.9])
    def test_against_joint_oracle(self, t):
        p, hs, rs, re = setup()
        joint = joint_oracle_state(hs, rs, re, t).matrix
        cp = propagators(hs, p, t)
        rs_t = reduced_system_state(coherence(cp, re, rs), rs).matrix
        assert max_abs(partial_trace_env(joint, 2, 8) - rs_t) < 1e-10
        assert max_abs(partial_trace_sys(joint, 2, 8) - reduced_env_state(cp, re, rs).matrix) < 1e-10

    def test_non_diagonal_environment_state(self, rng):
        # the column-scaling shortcut must not change results for dense states
        from conftest import random_density

        p, hs, rs, _ = setup()
        re = random_density(rng, 8)
        cp = propagators(hs, p, 1.1)
        joint = joint_oracle_state(hs, rs, re, 1.1).matrix
        assert max_abs(partial_trace_sys(joint, 2, 8) - reduced_env_state(cp, re, rs).matrix) < 1e-10
        assert max_abs(joint_state(cp, rs, re).matrix - joint) < 1e-10


class TestJointOracle:
    def test_zero_time(self):
        _, hs, rs, re = setup()
        np.testing.assert_allclose(
            joint_oracle_state(hs, rs, re, 0.0).matrix, product_state(rs, re).matrix, atol=1e-14
        )

    def test_spectrum_preserved(self):
        _, hs, rs, re = setup()
        rho = joint_oracle_state(hs, rs, re, 2.5).matrix
        assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(
            np.linalg.eigvalsh(rho), np.linalg.eigvalsh(product_state(rs, re).matrix), atol=1e-12
        )

    def test_block_assembly_matches(self):
        p, hs, rs, re = setup()
        for t in (0.5, 3.0):
            block = joint_state(propagators(hs, p, t), rs, re).matrix
            assert max_abs(block - joint_oracle_state(hs, rs, re, t).matrix) < 1e-10


class TestBlockEquivalence:
    def test_zero_time(self):
        p, hs, _, _ = setup()
        assert block_equivalence(hs, p, 0.0) < 1e-14

    @pytest.mark.parametrize("t", [0.3, 5.0, 19.0])
    def test_zero_coupling(self, t):
        p, hs, _, _ = setup(g=0.0)
        assert block_equivalence(hs, p, t) < 1e-10

    @pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
    def test_coupled(self, t):
        p, hs, _, _ = setup()
        assert block_equivalence(hs, p, t) < 1e-9

    def test_independent_of_pade(self):
        p, hs, _, _ = setup()
        u = expm(-1j * 1.0 * hs.h_total)
        cp = propagators(hs, p, 1.0)
        assert max_abs(u[:8, :8] - cp.omega0) < 1e-10
        assert max_abs(u[8:, 8:] - cp.omega1) < 1e-10
        assert max_abs(u[:8, 8:]) < 1e-10
