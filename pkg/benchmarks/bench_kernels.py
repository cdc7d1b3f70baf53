"""Compiled vs numpy kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Times the Voronoi cell accumulation (one 65536-row chunk, d = 3..8) and the
circle sup-convolution (N = 512, 2048), and checks that both backends agree.
"""

import argparse
import time

import numpy as np

from simplexwidth import _kernels
from simplexwidth.simplex import regular_simplex
from simplexwidth.sphere import CHUNK, sample_uniform


def best_of(fn, args, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def envelope_args(n, lam=0.5):
    rng = np.random.default_rng(0)
    delta = np.arange(n) - n // 2
    w = np.ones(n)
    w[0] = 0.0
    return (
        rng.uniform(0.5, 2, n) ** (1 - lam),
        rng.uniform(0.5, 2, n) ** lam,
        w,
        np.floor((1 - lam) * delta + 0.5).astype(np.int64),
    )


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    a = ap.parse_args()
    if _kernels.compiled is None:
        raise SystemExit("compiled extension not built; run `python3 setup.py build_ext --inplace`")
    py, cy = _kernels.python, _kernels.compiled
    print(f"{'kernel':<28}{'numpy ms':>12}{'cython ms':>12}{'speedup':>10}{'max diff':>12}")
    for d in (3, 4, 6, 8):
        args = (sample_uniform(d, CHUNK, seed=d), np.ascontiguousarray(regular_simplex(d).vertices))
        tp, tc = best_of(py.cell_accumulate, args, a.repeat), best_of(cy.cell_accumulate, args, a.repeat)
        diff = abs(py.cell_accumulate(*args)[4] - cy.cell_accumulate(*args)[4])
        print(f"{'cell_accumulate d=' + str(d):<28}{1e3 * tp:>12.2f}{1e3 * tc:>12.2f}{tp / tc:>10.1f}{diff:>12.1e}")
    for n in (512, 2048):
        args = envelope_args(n)
        tp, tc = best_of(py.circle_envelope, args, a.repeat), best_of(cy.circle_envelope, args, a.repeat)
        diff = np.max(np.abs(py.circle_envelope(*args) - cy.circle_envelope(*args)))
        print(f"{'circle_envelope N=' + str(n):<28}{1e3 * tp:>12.2f}{1e3 * tc:>12.2f}{tp / tc:>10.1f}{diff:>12.1e}")


if __name__ == "__main__":
    main()
