"""Trace-distance non-Markovianity diagnostics for the qubit.

The distinguishability pair is fixed to ``|+>`` and ``|->``, whose evolved
states differ only in the sign of the coherence; their trace distance is
``|Gamma(t)|``.
"""
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, GridTooSmall, NonUniformGrid
from .linalg import trace_norm

PAIR_TOL = 1e-10
# sigma below this is roundoff (|Gamma| = 1 to ~1e-16 when g = 0)
BACKFLOW_FLOOR = 1e-12


def evolved_pair(gamma):
    """Reduced states of ``|+-><+-|`` for coherence factor ``gamma``."""
    plus = 0.5 * np.array([[1.0, gamma], [np.conj(gamma), 1.0]], dtype=complex)
    minus = 0.5 * np.array([[1.0, -gamma], [-np.conj(gamma), 1.0]], dtype=complex)
    return plus, minus


def trace_distance(rho, sigma):
    return 0.5 * trace_norm(np.asarray(rho) - np.asarray(sigma))


def trace_distance_pair(sample, tol=PAIR_TOL):
    """Trace distance of the evolved ``+/-`` pair, cross-checked against ``|Gamma|``."""
    d = trace_distance(*evolved_pair(sample.gamma))
    if abs(d - abs(sample.gamma)) > tol:
        raise ConsistencyError(
            f"trace distance {d!r} differs from |Gamma| {abs(sample.gamma)!r} at t={sample.t}"
        )
    return d


def _check_grid(times):
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size < 3:
        raise GridTooSmall("need at least 3 samples")
    steps = np.diff(times)
    if not np.all(steps > 0):
        raise NonUniformGrid("times must be strictly increasing")
    h = (times[-1] - times[0]) / (times.size - 1)
    if np.abs(steps - h).max() > 1e-9 * max(abs(h), np.abs(times).max()):
        raise NonUniformGrid("times must be uniformly spaced")
    return times, h


def information_flow(times, d, floor=BACKFLOW_FLOOR):
    """``sigma(t) = dD/dt`` and the per-sample backflow flag.

    Second-order central differences inside, second-order one-sided
    stencils at the ends. A sample is flagged as backflow when
    ``sigma > floor``; end samples are never flagged.
    """
    times, h = _check_grid(times)
    d = np.asarray(d, dtype=float)
    if d.shape != times.shape:
        raise ValueError("d and times must have the same length")
    sigma = np.gradient(d, h, edge_order=2)
    backflow = sigma > floor
    backflow[0] = backflow[-1] = False
    return sigma, backflow


def blp_measure(sigma, dt):
    """Trapezoidal integral of the positive part of ``sigma``."""
    sigma = np.asarray(sigma, dtype=float)
    if sigma.size < 3:
        raise GridTooSmall("need at least 3 samples")
    return float(np.trapezoid(np.clip(sigma, 0.0, None), dx=dt))


def backflow_intervals(backflow):
    """Maximal runs of consecutive ``True`` as ``(start, stop)`` index pairs
    (``stop`` exclusive)."""
    flags = np.concatenate(([False], np.asarray(backflow, dtype=bool), [False]))
    edges = np.flatnonzero(np.diff(flags.astype(np.int8)))
    return list(zip(edges[::2].tolist(), edges[1::2].tolist()))


@dataclass(frozen=True, eq=False)
class WitnessSeries:
    times: np.ndarray
    d: np.ndarray
    sigma: np.ndarray
    backflow: np.ndarray
    blp: float


def witness_series(samples):
    """Run the pair distance, flow and BLP value over ``CoherenceSample``s."""
    times = np.array([s.t for s in samples])
    d = np.array([trace_distance_pair(s) for s in samples])
    sigma, backflow = information_flow(times, d)
    return WitnessSeries(times, d, sigma, backflow, blp_measure(sigma, times[1] - times[0]))
