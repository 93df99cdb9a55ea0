"""Compare the compiled and pure-Python scheduling kernels on flat mapping.

    python benchmarks/bench_kernel.py [--gates N] [--repeat R]
"""

from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from hqmap import kernel
from hqmap.arch import ArchConfig
from hqmap.bench import gen_repeat
from hqmap.flat import FlatGrid, encode_flat, map_flat
from hqmap.qasm import flatten


def timed(fn, repeat: int) -> float:
    runs = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        runs.append(time.perf_counter() - t)
    return statistics.median(runs)


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--gates", type=int, default=200_000)
    ap.add_argument("--qubits", type=int, default=16)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    k = 100
    fp = flatten(gen_repeat(k, max(1, args.gates // k), args.qubits, seed=1))
    cfg = ArchConfig()
    ops = encode_flat(fp, cfg)
    grid = FlatGrid(fp.qubits)
    W, H = grid.width, grid.height

    def kernel_only(b: str) -> None:
        pos = np.array([y * W + x for x, y in grid.assign.values()], dtype=np.int64)
        occ = np.full(W * H, -1, dtype=np.int64)
        occ[pos] = np.arange(len(pos))
        free, cyc = np.zeros(W * H, dtype=np.int64), np.zeros(W * H, dtype=np.int64)
        kernel.schedule(ops, 0, len(ops), pos, occ, free, cyc, W, H, cfg.swap_time,
                        cfg.swap_cycle_weight, np.zeros(2, dtype=np.int64), backend=b)

    backends = ["python"] + (["cython"] if kernel.BACKEND == "cython" else [])
    results = {}
    for b in backends:
        results[b] = timed(lambda b=b: kernel_only(b), args.repeat)
        total = timed(lambda b=b: map_flat(fp, backend=b), args.repeat)
        print(f"{b:<8} {len(fp):>9} gates  kernel {results[b] * 1000:8.1f} ms   map_flat {total * 1000:8.1f} ms")
    if len(results) == 2:
        a = map_flat(fp, backend="python").system_code.to_text()
        c = map_flat(fp, backend="cython").system_code.to_text()
        print(f"kernel speedup {results['python'] / results['cython']:.1f}x   identical output: {a == c}")


if __name__ == "__main__":
    main()
