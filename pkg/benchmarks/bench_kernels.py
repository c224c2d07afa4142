#!/usr/bin/env python3
"""Benchmark the compiled tree kernels against the pure-numpy fallback.

Both backends produce bit-identical trees; this script measures how much
wall time the compiled extension saves on representative workloads:

* growing a single unrestricted classification tree,
* growing depth-3 regression trees (the boosting workload),
* routing samples through a grown tree (``apply_tree``).

Usage::

    python3 benchmarks/bench_kernels.py [--samples N] [--features D] [--repeats R]
"""

from __future__ import annotations

import argparse
import importlib
import statistics
import time

import numpy as np


def _load_backends():
    py = importlib.import_module("speedclass._kernels_py")
    try:
        cy = importlib.import_module("speedclass._kernels")
    except ImportError:
        cy = None
    return py, cy


def _time(fn, repeats: int) -> float:
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return statistics.median(times)


def _workloads(n: int, d: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, d))
    y = rng.integers(0, 15, size=n).astype(np.int64)
    target = rng.normal(size=n)
    weights = np.ones(n)
    return X, y, target, weights


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--samples", type=int, default=4000)
    parser.add_argument("--features", type=int, default=7)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    py, cy = _load_backends()
    X, y, target, weights = _workloads(args.samples, args.features)

    cases = {
        "classification tree (unlimited depth)": lambda mod: mod.grow_tree_classification(
            X, y, weights, 15
        ),
        "regression tree (depth 3)": lambda mod: mod.grow_tree_regression(
            X, target, max_depth=3
        ),
    }

    print(f"workload: {args.samples} samples x {args.features} features, "
          f"median of {args.repeats} runs\n")
    header = f"{'case':<42} {'python':>10} {'compiled':>10} {'speedup':>9}"
    print(header)
    print("-" * len(header))

    for label, call in cases.items():
        t_py = _time(lambda: call(py), args.repeats)
        if cy is None:
            print(f"{label:<42} {t_py:>9.3f}s {'n/a':>10} {'n/a':>9}")
            continue
        t_cy = _time(lambda: call(cy), args.repeats)
        print(f"{label:<42} {t_py:>9.3f}s {t_cy:>9.3f}s {t_py / t_cy:>8.1f}x")

    # routing benchmark reuses the grown tree
    tree = py.grow_tree_classification(X, y, weights, 15)
    feature, threshold, left, right = tree[0], tree[1], tree[2], tree[3]
    queries = np.random.default_rng(1).normal(size=(200_000, args.features))
    t_py = _time(lambda: py.apply_tree(feature, threshold, left, right, queries),
                 args.repeats)
    label = "apply_tree (200k queries)"
    if cy is None:
        print(f"{label:<42} {t_py:>9.3f}s {'n/a':>10} {'n/a':>9}")
        print("\ncompiled extension not built; showing fallback only")
        return 0
    t_cy = _time(lambda: cy.apply_tree(feature, threshold, left, right, queries),
                 args.repeats)
    print(f"{label:<42} {t_py:>9.3f}s {t_cy:>9.3f}s {t_py / t_cy:>8.1f}x")

    # sanity: identical outputs on this workload
    t_c = cy.grow_tree_classification(X, y, weights, 15)
    for a, b in zip(tree, t_c):
        np.testing.assert_array_equal(a, b)
    print("\nbit-identical tree structures confirmed on this workload")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
