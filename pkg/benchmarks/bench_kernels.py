"""Compare the compiled continued-fraction kernels against the pure
Python fallback.

Run:  python3 benchmarks/bench_kernels.py [--q-max 2000] [--p 99991]

Both backends are loaded side by side (the fallback directly, the
compiled one through the normal import path), results are checked for
agreement, and timings are printed.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from zarmod import _kernels
from zarmod._kernels import pyfallback


def timed(fn, *args, repeat=3):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return out, best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--q-max", type=int, default=2000)
    ap.add_argument("--q-max-pure", type=int, default=500,
                    help="separate cap for the pure-Python sweep")
    ap.add_argument("--p", type=int, default=99991)
    args = ap.parse_args()

    print(f"active backend: {_kernels.BACKEND}")
    if _kernels.BACKEND != "cython":
        print("compiled kernel unavailable; timing the fallback only")

    rc, tc = timed(_kernels.cf_sweep_check, args.q_max_pure)
    rp, tp = timed(pyfallback.cf_sweep_check, args.q_max_pure)
    assert rc == rp, (rc, rp)
    print(f"cf_sweep_check(q<={args.q_max_pure}): "
          f"active {tc*1e3:.1f} ms, pure {tp*1e3:.1f} ms, "
          f"speedup {tp/tc:.1f}x, pairs {rc[0]}")

    rc, tc = timed(_kernels.cf_sweep_check, args.q_max)
    print(f"cf_sweep_check(q<={args.q_max}): active {tc*1e3:.1f} ms, "
          f"pairs {rc[0]}, violations {rc[1]}")

    mc, tc = timed(_kernels.max_quotient_array, args.p)
    mp, tp = timed(pyfallback.max_quotient_array, args.p)
    assert np.array_equal(np.asarray(mc), np.asarray(mp))
    print(f"max_quotient_array(p={args.p}): active {tc*1e3:.1f} ms, "
          f"pure {tp*1e3:.1f} ms, speedup {tp/tc:.1f}x")


if __name__ == "__main__":
    main()
