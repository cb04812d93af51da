"""Time-grid driver: one ``Trajectory`` per parameter set."""
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import find_peaks

from .dynamics import (
    block_equivalence,
    coherence,
    oracle_deviation,
    product_state,
    propagators,
)
from .errors import NumericError, QDephaseError
from .model import build_hamiltonians, gibbs_state, initial_qubit_state
from .thermo import thermo_record
from .witness import blp_measure, information_flow, trace_distance_pair

log = logging.getLogger(__name__)

CSV_COLUMNS = (
    "t", "re_gamma", "im_gamma", "abs_gamma", "q_mean", "c_coherent",
    "w_mean", "trace_distance", "sigma", "identity_residual",
)
ORACLE_SAMPLES = 10
EXTREMUM_PROMINENCE = 1e-12
ALIGN_STEPS = 2


def time_grid(t_max, n_samples):
    return np.linspace(0.0, float(t_max), int(n_samples))


@dataclass(eq=False)
class Trajectory:
    params: object
    t: np.ndarray
    gamma: np.ndarray
    q_mean: np.ndarray
    c_coherent: np.ndarray
    w_mean: np.ndarray
    trace_distance: np.ndarray
    sigma: np.ndarray
    backflow: np.ndarray
    u_s_delta: np.ndarray
    u_total_delta: np.ndarray
    h_i_final: np.ndarray
    h_total_scale: float = 1.0
    oracle: dict = field(default_factory=dict)

    @property
    def abs_gamma(self):
        return np.abs(self.gamma)

    @property
    def identity_residual(self):
        return np.abs(self.q_mean - self.c_coherent)

    @property
    def n_spins(self):
        return self.params.n_spins

    @property
    def g(self):
        return self.params.g0

    @property
    def dt(self):
        return self.t[1] - self.t[0] if self.t.size > 1 else 0.0

    @property
    def blp(self):
        return blp_measure(self.sigma, self.dt)

    def __len__(self):
        return self.t.size

    def columns(self):
        """Table columns in CSV order."""
        return {
            "t": self.t,
            "re_gamma": self.gamma.real,
            "im_gamma": self.gamma.imag,
            "abs_gamma": self.abs_gamma,
            "q_mean": self.q_mean,
            "c_coherent": self.c_coherent,
            "w_mean": self.w_mean,
            "trace_distance": self.trace_distance,
            "sigma": self.sigma,
            "identity_residual": self.identity_residual,
        }


def compute_trajectory(params, times, oracle=False, oracle_samples=ORACLE_SAMPLES):
    """Evolve the model over ``times`` and evaluate every diagnostic.

    With ``oracle=True`` the joint-unitary route is run at ``oracle_samples``
    evenly spread grid times and its deviations are stored in
    ``Trajectory.oracle``.
    """
    times = np.asarray(times, dtype=float)
    t_now = None
    try:
        hs = build_hamiltonians(params)
        rho_s0 = initial_qubit_state(params)
        rho_e0 = gibbs_state(hs.h_e, params.beta)
        joint_0 = product_state(rho_s0, rho_e0)
        n = times.size
        gamma = np.empty(n, dtype=complex)
        d = np.empty(n)
        q, c, w, dus, dut, hif = (np.empty(n) for _ in range(6))
        for i, t in enumerate(times):
            t_now = float(t)
            cp = propagators(hs, params, t)
            sample = coherence(cp, rho_e0, rho_s0)
            rec = thermo_record(hs, cp, rho_s0, rho_e0, joint_0)
            gamma[i] = sample.gamma
            d[i] = trace_distance_pair(sample)
            q[i], c[i], w[i] = rec.q_mean, rec.c_coherent, rec.w_mean
            dus[i], dut[i], hif[i] = rec.u_s_delta, rec.u_total_delta, rec.h_i_final
        t_now = None
        sigma, backflow = information_flow(times, d)

        oracle_report = {}
        if oracle:
            idx = np.unique(np.linspace(0, n - 1, min(oracle_samples, n)).round().astype(int))
            blk, sys_dev, env_dev = [], [], []
            for i in idx:
                t_now = float(times[i])
                blk.append(block_equivalence(hs, params, t_now))
                ds, de = oracle_deviation(hs, params, rho_s0, rho_e0, t_now)
                sys_dev.append(ds)
                env_dev.append(de)
            t_now = None
            oracle_report = {
                "times": times[idx],
                "block_unitary": np.array(blk),
                "reduced_system": np.array(sys_dev),
                "reduced_env": np.array(env_dev),
            }
    except (QDephaseError, ArithmeticError, np.linalg.LinAlgError) as exc:
        raise NumericError(params.n_spins, params.g0, t_now, exc) from exc

    return Trajectory(
        params=params, t=times, gamma=gamma, q_mean=q, c_coherent=c, w_mean=w,
        trace_distance=d, sigma=sigma, backflow=backflow, u_s_delta=dus,
        u_total_delta=dut, h_i_final=hif,
        h_total_scale=float(np.abs(hs.h_total).max()), oracle=oracle_report,
    )


# --------------------------------------------------------------------------
# heat / coherence extremum alignment
# --------------------------------------------------------------------------


def local_maxima(y, prominence=EXTREMUM_PROMINENCE):
    """Interior local maxima whose prominence exceeds ``prominence``."""
    idx, _ = find_peaks(np.asarray(y, dtype=float), prominence=prominence)
    return idx


def local_minima(y, prominence=EXTREMUM_PROMINENCE):
    return local_maxima(-np.asarray(y, dtype=float), prominence)


@dataclass(frozen=True)
class Alignment:
    """Pairing of heat maxima with coherence minima on a discrete grid.

    ``pairs`` holds ``(t_heat_max, t_nearest_coherence_extremum, gap_steps,
    extremum_is_minimum)``. ``orphans`` lists coherence minima with no heat
    maximum within tolerance.
    """

    pairs: tuple
    orphans: tuple
    tolerance_steps: int

    @property
    def ok(self):
        return all(gap <= self.tolerance_steps and is_min for _, _, gap, is_min in self.pairs) \
            and not self.orphans


def heat_coherence_alignment(traj, steps=ALIGN_STEPS, prominence=EXTREMUM_PROMINENCE):
    t = traj.t
    q_max = local_maxima(traj.q_mean, prominence)
    g_min = local_minima(traj.abs_gamma, prominence)
    g_max = local_maxima(traj.abs_gamma, prominence)
    ext = np.concatenate([g_min, g_max])
    is_min = np.concatenate([np.ones(g_min.size, bool), np.zeros(g_max.size, bool)])
    pairs = []
    for i in q_max:
        if ext.size == 0:
            pairs.append((float(t[i]), float("nan"), np.inf, False))
            continue
        j = int(np.argmin(np.abs(ext - i)))
        pairs.append((float(t[i]), float(t[ext[j]]), int(abs(ext[j] - i)), bool(is_min[j])))
    orphans = tuple(
        float(t[j]) for j in g_min
        if q_max.size == 0 or np.abs(q_max - j).min() > steps
    )
    return Alignment(tuple(pairs), orphans, steps)
