import itertools
import os
import subprocess
import sys

import numpy as np
import pytest

from sumfree import _kernels_py, kernels


def brute(arrays, target, modulus):
    out = []
    for idx in itertools.product(*(range(a.shape[0]) for a in arrays)):
        s = sum(a[j] for a, j in zip(arrays, idx))
        d = (s - target) % modulus if modulus else s - target
        if not np.any(d):
            out.append(idx)
    return out


@pytest.mark.parametrize("trial", range(40))
def test_zero_sum_search_matches_brute_force(kernel_impl, trial):
    rng = np.random.default_rng(trial)
    k = int(rng.integers(2, 5))
    n = int(rng.integers(1, 5))
    m = int(rng.integers(2, 4))
    arrays = [rng.integers(0, m, size=(int(rng.integers(0, 7)), n)) for _ in range(k)]
    for modulus in (0, m):
        target = np.full(n, m - 1) if modulus == 0 else np.zeros(n, dtype=np.int64)
        got = [tuple(r) for r in kernel_impl.zero_sum_search(arrays, target, modulus, m).tolist()]
        assert got == brute(arrays, target, modulus)


def test_wide_keys_fall_back(kernel_impl):
    rng = np.random.default_rng(3)
    n = 70  # 2^70 does not fit in int64 keys
    arrays = [rng.integers(0, 2, size=(5, n)) for _ in range(3)]
    arrays[2] = 1 - arrays[0][[0, 1, 2, 3, 4]] - 0 * arrays[1][:5]
    arrays[1] = np.zeros((5, n), dtype=np.int64)
    target = np.ones(n, dtype=np.int64)
    got = [tuple(r) for r in kernel_impl.zero_sum_search(arrays, target, 0, 2).tolist()]
    assert got == brute(arrays, target, 0)


@pytest.mark.parametrize("P", [17, 2**31 - 1, 2**61 - 1])
def test_hash_images(kernel_impl, P):
    rng = np.random.default_rng(P % 1000)
    X = rng.integers(0, 5, size=(30, 9))
    c = rng.integers(0, min(P, 2**62), size=9)
    expected = [(sum(int(a) * int(b) for a, b in zip(row, c)) + 7) % P for row in X.tolist()]
    assert kernel_impl.hash_images(X, c, P, 7).tolist() == expected


def test_backend_selection_env():
    code = "from sumfree import kernels; print(kernels.BACKEND)"
    env = dict(os.environ, SUMFREE_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
    assert kernels.BACKEND in ("cython", "python")


def test_keys_fit():
    assert _kernels_py.keys_fit(2, 62)
    assert not _kernels_py.keys_fit(2, 63)
