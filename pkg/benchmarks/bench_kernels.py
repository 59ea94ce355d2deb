"""Time the numba kernels against the numpy fallbacks and check they agree.

Usage: python benchmarks/bench_kernels.py [--repeat R] [--size N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from clustermaps import _accel
from clustermaps.quiver import build_period1, primitive


def _inputs(size: int):
    rng = np.random.default_rng(0)
    half = list(rng.integers(-2, 3, size=(size - 1) // 2))
    tup = half + ([int(rng.integers(-2, 3))] if (size - 1) % 2 else []) + half[::-1]
    b = build_period1(tup).b
    pos = np.maximum(np.array(tup), 0).astype(np.int64)
    neg = np.maximum(-np.array(tup), 0).astype(np.int64)
    seed = np.zeros(size, dtype=np.int64)
    seed[0] = -1
    ca = rng.integers(-50, 50, 400).astype(np.int64)
    cb = rng.integers(-50, 50, 400).astype(np.int64)
    # mixed-radix exponent keys are dense; the wide case exercises the sort path
    kd = [np.sort(rng.choice(1 << 12, 400, replace=False)).astype(np.int64) for _ in range(2)]
    kw = [np.sort(rng.choice(1 << 24, 400, replace=False)).astype(np.int64) for _ in range(2)]
    return {
        "mutate": (np.ascontiguousarray(b), 0),
        "periodic_chain": (np.ascontiguousarray(primitive(size, 1).b), 4),
        "tropical": (pos, neg, seed, 400),
        "sparse_mul_dense": (kd[0], ca, kd[1], cb, np.int64(0)),
        "sparse_mul_wide": (kw[0], ca, kw[1], cb, np.int64(0)),
    }


def _same(a, b) -> bool:
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    return bool(np.array_equal(np.asarray(a), np.asarray(b)))


def _time(fn, args, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=50)
    ap.add_argument("--size", type=int, default=40)
    args = ap.parse_args(argv)
    inputs = _inputs(args.size)
    print(f"backend: {_accel.backend()}  size: {args.size}  repeat: {args.repeat}")
    print(f"{'kernel':<18}{'numpy (us)':>12}{'active (us)':>13}{'speedup':>9}  agree")
    ok = True
    for name, call in inputs.items():
        kernel = name.split("_dense")[0].split("_wide")[0]
        ref, fast = _accel.numpy_impl[kernel], _accel.kernel_impl[kernel]
        fast(*call)  # compile outside the timed region
        agree = _same(ref(*call), fast(*call))
        ok &= agree
        t_ref = _time(ref, call, args.repeat) * 1e6
        t_fast = _time(fast, call, args.repeat) * 1e6
        print(f"{name:<18}{t_ref:>12.1f}{t_fast:>13.1f}{t_ref / t_fast:>9.1f}  {agree}")
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
