import numpy as np
import pytest

from qdephase import linalg
from qdephase.errors import NoConvergence, NumericError
from qdephase.model import ModelParams
from qdephase.trajectory import (
    compute_trajectory,
    heat_coherence_alignment,
    local_maxima,
    local_minima,
    time_grid,
)


@pytest.fixture(scope="module")
def small():
    return compute_trajectory(ModelParams.reference_regime(3, 0.5), time_grid(10.0, 401), oracle=True, oracle_samples=5)


def test_time_grid():
    t = time_grid(20, 2001)
    assert t[0] == 0.0 and t[-1] == 20.0 and t.size == 2001
    assert t[1] == pytest.approx(0.01)


def test_trajectory_shapes(small):
    assert len(small) == 401
    cols = small.columns()
    assert all(v.shape == (401,) for v in cols.values())
    assert small.dt == pytest.approx(0.025)
    assert small.n_spins == 3 and small.g == 0.5


def test_trajectory_identities(small):
    assert small.identity_residual.max() < 1e-9
    assert np.abs(small.w_mean - small.q_mean).max() < 1e-9
    assert np.abs(small.trace_distance - small.abs_gamma).max() < 1e-10
    assert abs(small.gamma[0] - 1.0) < 1e-12
    assert small.q_mean[0] == pytest.approx(0.0, abs=1e-12)


def test_oracle_report(small):
    o = small.oracle
    assert o["times"].size == 5 and o["times"][0] == 0.0 and o["times"][-1] == 10.0
    assert o["block_unitary"].max() < 1e-8
    assert max(o["reduced_system"].max(), o["reduced_env"].max()) < 1e-10


def test_no_oracle_by_default():
    tr = compute_trajectory(ModelParams.reference_regime(2, 0.5), time_grid(1.0, 5))
    assert tr.oracle == {}


def test_numeric_error_carries_coordinates(monkeypatch):
    monkeypatch.setattr(linalg, "JACOBI_MAX_SWEEPS", 0)
    with pytest.raises(NumericError) as info:
        compute_trajectory(ModelParams.reference_regime(3, 0.5), time_grid(1.0, 5))
    assert info.value.n_spins == 3 and info.value.g == 0.5
    assert isinstance(info.value.cause, NoConvergence)
    assert "N=3" in str(info.value)


def test_too_few_samples_is_numeric_error():
    with pytest.raises(NumericError):
        compute_trajectory(ModelParams.reference_regime(2, 0.5), time_grid(1.0, 2))


def test_extrema():
    x = np.linspace(0, 4 * np.pi, 401)
    y = np.cos(x)
    np.testing.assert_array_equal(local_maxima(y), [200])
    np.testing.assert_array_equal(local_minima(y), [100, 300])
    assert local_maxima(np.ones(10)).size == 0


def test_alignment(small):
    a = heat_coherence_alignment(small)
    assert a.ok and len(a.pairs) > 0
    assert all(gap <= 2 and is_min for _, _, gap, is_min in a.pairs)
