"""Numeric hot loops, each in a numba and a pure-numpy flavour.

Both flavours implement the same arithmetic and the same rotation order, so
they agree to roundoff. The public names (``jacobi_hermitian``,
``amplitude_energy_shift``) point at whichever flavour ``_backend`` selected.
"""
from functools import lru_cache

import numpy as np

from ._backend import USE_NUMBA, njit


@lru_cache(maxsize=64)
def round_robin_schedule(n):
    """Pairings (p, q), p < q, covering every off-diagonal index pair once.

    Returns an int array of shape (rounds, n_pad // 2, 2). Within a round the
    pairs are disjoint, so their rotations commute. For odd ``n`` a phantom
    index ``n`` is added; pairs touching it are skipped by the kernels.
    """
    m = n + (n % 2)
    if m < 2:
        return np.zeros((0, 0, 2), dtype=np.int64)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            pairs.append((min(a, b), max(a, b)))
        rounds.append(pairs)
        players = [players[0], players[-1]] + players[1:-1]
    out = np.array(rounds, dtype=np.int64)
    out.setflags(write=False)
    return out


# --------------------------------------------------------------------------
# cyclic Jacobi for complex Hermitian matrices
# --------------------------------------------------------------------------


@njit(cache=True)
def _rotation(app, aqq, mag):
    theta = (aqq - app) / (2.0 * mag)
    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
    if theta < 0.0:
        t = -t
    c = 1.0 / np.sqrt(t * t + 1.0)
    return t, c, t * c


@njit(cache=True)
def _jacobi_numba(h, schedule, tol, skip, max_sweeps):
    n = h.shape[0]
    a = h.copy()
    v = np.eye(n, dtype=np.complex128)
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += a[i, j].real ** 2 + a[i, j].imag ** 2
        if np.sqrt(off) <= tol:
            w = np.empty(n)
            for i in range(n):
                w[i] = a[i, i].real
            return w, v, sweep
        if sweep == max_sweeps:
            break
        for r in range(schedule.shape[0]):
            for k in range(schedule.shape[1]):
                p = schedule[r, k, 0]
                q = schedule[r, k, 1]
                if q >= n:
                    continue
                apq = a[p, q]
                mag = abs(apq)
                if mag <= skip:
                    continue
                phase = apq / mag
                ph = phase.conjugate()
                app = a[p, p].real
                aqq = a[q, q].real
                t, c, s = _rotation(app, aqq, mag)
                sph = s * ph
                cph = c * ph
                for i in range(n):
                    x = a[i, p]
                    y = a[i, q]
                    a[i, p] = c * x - sph * y
                    a[i, q] = s * x + cph * y
                    x = v[i, p]
                    y = v[i, q]
                    v[i, p] = c * x - sph * y
                    v[i, q] = s * x + cph * y
                sphc = s * phase
                cphc = c * phase
                for j in range(n):
                    x = a[p, j]
                    y = a[q, j]
                    a[p, j] = c * x - sphc * y
                    a[q, j] = s * x + cphc * y
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = app - t * mag
                a[q, q] = aqq + t * mag
    w = np.empty(n)
    for i in range(n):
        w[i] = a[i, i].real
    return w, v, -1


def _jacobi_numpy(h, schedule, tol, skip, max_sweeps):
    n = h.shape[0]
    a = np.array(h, dtype=np.complex128, copy=True)
    v = np.eye(n, dtype=np.complex128)
    offmask = ~np.eye(n, dtype=bool)
    for sweep in range(max_sweeps + 1):
        if np.sqrt(np.sum(np.abs(a[offmask]) ** 2)) <= tol:
            return np.diag(a).real.copy(), v, sweep
        if sweep == max_sweeps:
            break
        for pairs in schedule:
            pairs = pairs[pairs[:, 1] < n]
            p, q = pairs[:, 0], pairs[:, 1]
            apq = a[p, q]
            mag = np.abs(apq)
            keep = mag > skip
            if not keep.any():
                continue
            p, q, apq, mag = p[keep], q[keep], apq[keep], mag[keep]
            phase = apq / mag
            ph = phase.conj()
            app = a[p, p].real
            aqq = a[q, q].real
            theta = (aqq - app) / (2.0 * mag)
            t = np.sign(theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
            t[theta == 0.0] = 1.0
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            for m in (a, v):
                x = m[:, p].copy()
                y = m[:, q]
                m[:, p] = c * x - (s * ph) * y
                m[:, q] = s * x + (c * ph) * y
            x = a[p, :].copy()
            y = a[q, :]
            a[p, :] = c[:, None] * x - (s * phase)[:, None] * y
            a[q, :] = s[:, None] * x + (c * phase)[:, None] * y
            a[p, q] = 0.0
            a[q, p] = 0.0
            a[p, p] = app - t * mag
            a[q, q] = aqq + t * mag
    return np.diag(a).real.copy(), v, -1


def jacobi_hermitian_numba(h, tol, skip, max_sweeps):
    h = np.ascontiguousarray(h, dtype=np.complex128)
    return _jacobi_numba(h, round_robin_schedule(h.shape[0]), tol, skip, max_sweeps)


def jacobi_hermitian_numpy(h, tol, skip, max_sweeps):
    h = np.asarray(h, dtype=np.complex128)
    return _jacobi_numpy(h, round_robin_schedule(h.shape[0]), tol, skip, max_sweeps)


# --------------------------------------------------------------------------
# coherent-energy amplitude sum
# --------------------------------------------------------------------------


@njit(cache=True)
def _amplitude_energy_shift_numba(omega, pops, energies):
    # sum_m pops[m] * (sum_n energies[n] |omega[n, m]|^2 - energies[m])
    n = omega.shape[0]
    total = 0.0
    for m in range(n):
        if pops[m] == 0.0:
            continue
        acc = 0.0
        for k in range(n):
            z = omega[k, m]
            acc += energies[k] * (z.real * z.real + z.imag * z.imag)
        total += pops[m] * (acc - energies[m])
    return total


def _amplitude_energy_shift_numpy(omega, pops, energies):
    probs = omega.real ** 2 + omega.imag ** 2
    return float(pops @ (energies @ probs - energies))


def amplitude_energy_shift_numba(omega, pops, energies):
    return _amplitude_energy_shift_numba(
        np.ascontiguousarray(omega, dtype=np.complex128),
        np.ascontiguousarray(pops, dtype=np.float64),
        np.ascontiguousarray(energies, dtype=np.float64),
    )


amplitude_energy_shift_numpy = _amplitude_energy_shift_numpy

if USE_NUMBA:
    jacobi_hermitian = jacobi_hermitian_numba
    amplitude_energy_shift = amplitude_energy_shift_numba
else:
    jacobi_hermitian = jacobi_hermitian_numpy
    amplitude_energy_shift = amplitude_energy_shift_numpy
