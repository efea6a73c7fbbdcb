"""Benchmark the per-mask error kernel: numba vs pure numpy.

Run from the repository root:

    python3 benchmarks/bench_kernels.py

The workload mirrors the online learner's hot loop: for each of several
(m, n) shapes, evaluate the minimum-table error count of all single-step
refinement neighbors of a mid-sized structure.
"""

from __future__ import annotations

import time

import numpy as np

from falsepred import kernels
from falsepred.model import WorldConfig, generate_stream_arrays


def _bench(fn, bits, xa, masks, repeat: int) -> float:
    fn(bits, xa, masks)  # warm up (JIT compile / cache touch)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(bits, xa, masks)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    if not kernels.USING_NUMBA:
        print("numba unavailable or disabled; only the numpy path can run")
    print(f"{'m':>7} {'n':>3} {'masks':>6} {'numpy (ms)':>11} {'numba (ms)':>11} {'speedup':>8}")
    for m, n in [(200, 12), (2000, 12), (20000, 12), (20000, 20), (100000, 12)]:
        world = WorldConfig(n_redundant=n, alpha=0.8, seed=12345)
        bits, xa = generate_stream_arrays(world, m)
        base = (1 << (n // 2 + 1)) - 2  # structure {1..n/2}
        masks = np.array(
            [base ^ (1 << j) for j in range(n + 1)] + [base], dtype=np.int64
        )
        t_np = _bench(kernels._errors_for_masks_numpy, bits, xa, masks, repeat=5)
        row = f"{m:>7} {n:>3} {len(masks):>6} {t_np * 1e3:>11.3f}"
        if kernels.USING_NUMBA:
            t_nb = _bench(kernels._errors_for_masks_numba, bits, xa, masks, repeat=5)
            row += f" {t_nb * 1e3:>11.3f} {t_np / t_nb:>8.1f}x"
        print(row)


if __name__ == "__main__":
    main()
