"""Time the numba and numpy kernel backends on the workloads the pipeline runs.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each kernel is called once before timing so JIT compilation is excluded.
The two backends must agree; a mismatch aborts the run.
"""

import argparse
import random
import time

import numpy as np

from pillai_fib import _kernels
from pillai_fib.numerics import const_log
from pillai_fib.search import SIEVE_PRIMES, SearchBox
from pillai_fib.sequences import fib


def residue_workload():
    box = SearchBox.from_n_bound(4, 56, 3, 101)
    mods = np.array(SIEVE_PRIMES, dtype=np.int64)

    def res(vals):
        return np.array([[v % m for v in vals] for m in SIEVE_PRIMES], dtype=np.int64)

    return (res([3**x for x in range(1, box.x_max)]), res([2**y for y in range(box.y_min, box.y_max + 1)]),
            res([fib(n) for n in range(box.n_min, box.n_max + 1)]), mods)


def scan_workload():
    return (np.arange(1, 112, dtype=np.int64), np.arange(4, 57, dtype=np.int64),
            np.arange(3, 102, dtype=np.int64), float(const_log(3)), float(const_log(2)),
            float(const_log("alpha")), 0.5 * float(const_log(5)), 5 ** 0.5)


def lemma_workload():
    rng = random.Random(1)
    return (rng.random(), rng.uniform(-5, 5), 50, 5.0, 1.618, 1, 30)


def best_of(fn, args, repeat):
    out = fn(*args)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times), out


def same(a, b):
    if isinstance(a, tuple):
        return a[1:] == b[1:] and abs(a[0] - b[0]) <= 1e-12 * max(1.0, abs(a[0]))
    return np.array_equal(a, b)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if not _kernels.HAVE_NUMBA:
        print("numba unavailable or disabled; only the numpy backend can be timed")

    workloads = {
        "residue_hits": residue_workload(),
        "linear_form_scan": scan_workload(),
        "lemma_flags": lemma_workload(),
    }
    print(f"{'kernel':<18}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}")
    for name, wl in workloads.items():
        t_np, out_np = best_of(getattr(_kernels, f"{name}_numpy"), wl, args.repeat)
        jit = getattr(_kernels, f"{name}_numba")
        if jit is None:
            print(f"{name:<18}{t_np * 1e3:>12.2f}{'-':>12}{'-':>10}")
            continue
        t_nb, out_nb = best_of(jit, wl, args.repeat)
        if not same(out_np, out_nb):
            raise SystemExit(f"{name}: backends disagree")
        print(f"{name:<18}{t_np * 1e3:>12.2f}{t_nb * 1e3:>12.2f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
