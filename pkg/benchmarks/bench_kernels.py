"""Time the compiled kernels against the pure-numpy fallback.

Usage: python benchmarks/bench_kernels.py [--repeats N]

Covers the two hot loops: symmetrized co-occurrence counting on 64x64
tiles and one online-backprop epoch of the default 24-30-7 network.
"""

import argparse
import time

import numpy as np

from massfuse._kernels import available_backends, get_backend


def time_call(func, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        func()
        best = min(best, time.perf_counter() - start)
    return best


def bench_glcm(backend, tiles, repeats):
    def run():
        for tile in tiles:
            for drow, dcol in ((0, 1), (-1, 1), (-1, 0), (-1, -1)):
                backend.glcm_counts(tile, drow, dcol, 16)

    return time_call(run, repeats)


def bench_train(backend, repeats):
    rng = np.random.default_rng(0)
    sizes = (24, 30, 7)
    xs = rng.uniform(-1, 1, size=(200, sizes[0]))
    ds = rng.uniform(0, 1, size=(200, sizes[-1]))
    order = np.arange(200, dtype=np.intp)

    def run():
        gen = np.random.default_rng(1)
        weights = [gen.uniform(-0.5, 0.5, size=p) for p in zip(sizes, sizes[1:])]
        biases = [gen.uniform(-0.5, 0.5, size=s) for s in sizes[1:]]
        for _ in range(10):
            backend.train_epoch(weights, biases, xs, ds, order, 0.1, 1.0)

    return time_call(run, repeats)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(42)
    tiles = [rng.integers(0, 16, size=(64, 64), dtype=np.uint8) for _ in range(100)]

    names = available_backends()
    if "cython" not in names:
        print("compiled backend not built; only timing the fallback")

    rows = []
    for name in names:
        backend = get_backend(name)
        glcm = bench_glcm(backend, tiles, args.repeats)
        train = bench_train(backend, args.repeats)
        rows.append((name, glcm, train))

    print(f"{'backend':<10} {'glcm 100x4 tiles':>18} {'train 10x200 steps':>20}")
    for name, glcm, train in rows:
        print(f"{name:<10} {glcm * 1e3:>15.2f} ms {train * 1e3:>17.2f} ms")
    if len(rows) == 2:
        print(
            f"{'speedup':<10} {rows[1][1] / rows[0][1]:>16.1f}x "
            f"{rows[1][2] / rows[0][2]:>18.1f}x"
        )


if __name__ == "__main__":
    main()
