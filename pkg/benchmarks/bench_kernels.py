"""Benchmark the compiled sweep kernels against the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--sizes 32,64,128] [--reps 5]
"""

import argparse
import time

import numpy as np

from airsel.kernels import available_backends, get_backend


def best_time(fn, reps):
    best = float("inf")
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def make_problems(n, seed):
    rng = np.random.Generator(np.random.Philox(key=seed))
    k = n // 2
    x = rng.standard_normal((n, n))
    q = np.ascontiguousarray(x @ x.T / n + 0.2 * np.eye(n))
    c = np.ascontiguousarray(rng.standard_normal(n))
    ct = np.ascontiguousarray(
        rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
    )
    diag_extra = np.ascontiguousarray(rng.uniform(0.1, 1.0, n))
    c_lin = np.ascontiguousarray(rng.standard_normal(n))
    return q, c, ct, diag_extra, c_lin


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="32,64,128,256")
    parser.add_argument("--reps", type=int, default=5)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    backends = available_backends()
    print(f"backends: {', '.join(backends)}")
    header = f"{'kernel':>14s} {'N':>5s} " + " ".join(
        f"{b:>12s}" for b in backends
    )
    if len(backends) == 2:
        header += f" {'speedup':>9s}"
    print(header)
    for n in sizes:
        q, c, ct, diag_extra, c_lin = make_problems(n, seed=n)
        rows = {
            "box_lasso_cd": lambda impl: impl.box_lasso_cd(
                q, c, 0.3, 1e-300, 20, np.zeros(n)
            ),
            "gs_qp_sweep": lambda impl: impl.gs_qp_sweep(q, c, np.full(n, 0.5)),
            "fista_sweep": lambda impl: impl.fista_sweep(
                ct, diag_extra, c_lin, 0.1, np.full(n, 0.5)
            ),
        }
        for name, call in rows.items():
            times = [
                best_time(lambda impl=get_backend(b): call(impl), args.reps)
                for b in backends
            ]
            line = f"{name:>14s} {n:>5d} " + " ".join(
                f"{1e3 * t:>10.3f}ms" for t in times
            )
            if len(times) == 2:
                line += f" {times[0] / times[1]:>8.1f}x"
            print(line)


if __name__ == "__main__":
    main()
