"""Compare the numba and pure-numpy kernels.

Run with ``python benchmarks/bench_kernels.py [--sizes 32 64 128] [--repeat 3]``.
Both flavours are imported directly, so the QDEPHASE_NO_NUMBA flag does not
matter here. The first numba call is a warm-up and is not timed.
"""
import argparse
import time

import numpy as np

from qdephase import kernels
from qdephase._backend import HAVE_NUMBA


def best_of(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def random_hermitian(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (a + a.conj().T)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[16, 32, 64, 128])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    if not HAVE_NUMBA:
        print("numba is not installed; the 'numba' column runs the numpy fallback")
    rng = np.random.default_rng(0)

    # warm-up compiles
    h = random_hermitian(rng, 4)
    kernels.jacobi_hermitian_numba(h, 1e-13, 1e-18, 100)
    kernels.amplitude_energy_shift_numba(np.eye(4, dtype=complex), np.ones(4) / 4, np.arange(4.0))

    print(f"{'kernel':<16}{'n':>6}{'numba [s]':>14}{'numpy [s]':>14}{'speed-up':>10}")
    for n in args.sizes:
        h = random_hermitian(rng, n)
        fro = np.linalg.norm(h)
        jargs = (h, 1e-13 * fro, 1e-18 * fro, 100)
        t_nb = best_of(lambda: kernels.jacobi_hermitian_numba(*jargs), args.repeat)
        t_np = best_of(lambda: kernels.jacobi_hermitian_numpy(*jargs), args.repeat)
        print(f"{'jacobi':<16}{n:>6}{t_nb:>14.4e}{t_np:>14.4e}{t_np / t_nb:>10.1f}")

    for n in args.sizes:
        w, v = np.linalg.eigh(random_hermitian(rng, n))
        u = (v * np.exp(-1j * w)) @ v.conj().T
        pops = rng.random(n)
        pops /= pops.sum()
        e = rng.normal(size=n)
        reps = max(1, 20000 // n)

        def loop(f):
            return lambda: [f(u, pops, e) for _ in range(reps)]

        t_nb = best_of(loop(kernels.amplitude_energy_shift_numba), args.repeat) / reps
        t_np = best_of(loop(kernels.amplitude_energy_shift_numpy), args.repeat) / reps
        print(f"{'amplitude_shift':<16}{n:>6}{t_nb:>14.4e}{t_np:>14.4e}{t_np / t_nb:>10.1f}")


if __name__ == "__main__":
    main()
