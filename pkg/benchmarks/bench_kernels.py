"""Compare the compiled and pure-Python kernels on construction-sized inputs.

Run with ``python3 benchmarks/bench_kernels.py [--repeat R]``.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from sumfree import _kernels_py

try:
    from sumfree import _kernels as _kernels_c
except ImportError:  # extension not built
    _kernels_c = None


def make_inputs(m: int, k: int, n: int, seed: int):
    """k member arrays shaped like the lifted sets X_i for one construction."""
    rng = np.random.default_rng(seed)
    size = min(m**n, 4000)
    X0 = rng.integers(0, m, size=(size, n), dtype=np.int64)
    members = [X0[rng.random(size) < 0.2] for _ in range(k)]
    target = np.full(n, m - 1, dtype=np.int64)
    coeffs = rng.integers(0, 257, size=n, dtype=np.int64)
    return X0, members, target, coeffs


def run(repeat: int) -> None:
    impls = {"python": _kernels_py}
    if _kernels_c is not None:
        impls["compiled"] = _kernels_c
    print(f"{'case':<34}{'impl':<10}{'best (ms)':>12}")
    for m, k, n in ((2, 3, 12), (2, 3, 15), (3, 3, 12)):
        X0, members, target, coeffs = make_inputs(m, k, n, seed=0)
        results = {}
        for name, mod in impls.items():
            cases = {
                "hash_images": lambda mod=mod: mod.hash_images(X0, coeffs, 257, 5),
                "zero_sum_search": lambda mod=mod: mod.zero_sum_search(members, target, 0, m),
            }
            for label, fn in cases.items():
                results[(name, label)] = fn()
                best = min(timeit.repeat(fn, number=1, repeat=repeat)) * 1e3
                print(f"{label + f' m={m} k={k} n={n}':<34}{name:<10}{best:>12.2f}")
        if len(impls) == 2:
            for label in ("hash_images", "zero_sum_search"):
                assert np.array_equal(results[("python", label)], results[("compiled", label)]), label


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    run(ap.parse_args().repeat)


if __name__ == "__main__":
    main()
