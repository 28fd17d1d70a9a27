"""Pure-Python/numpy versions of the hot kernels.

Same signatures and results as the compiled module ``sumfree._kernels``.
"""

from __future__ import annotations

import numpy as np

_I64_LIMIT = 2**63


def hash_images(X: np.ndarray, coeffs: np.ndarray, P: int, offset: int) -> np.ndarray:
    """``(X @ coeffs + offset) mod P`` for each row of a non-negative integer matrix."""
    X = np.ascontiguousarray(X, dtype=np.int64)
    coeffs = np.asarray(coeffs, dtype=np.int64) % P
    n = X.shape[1] if X.ndim == 2 else 0
    top = int(X.max()) if X.size else 0
    if top * (P - 1) * max(n, 1) + P < _I64_LIMIT:
        return (X @ coeffs + offset % P) % P
    out = np.empty(X.shape[0], dtype=np.int64)
    cs = [int(c) for c in coeffs]
    off = offset % P
    for i, row in enumerate(X.tolist()):
        out[i] = (sum(a * c for a, c in zip(row, cs)) + off) % P
    return out


def encode_keys(A: np.ndarray, base: int) -> np.ndarray:
    """Base-``base`` integer key of each row (entries must lie in ``[0, base)``)."""
    A = np.asarray(A, dtype=np.int64)
    weights = base ** np.arange(A.shape[1], dtype=np.int64)
    return A @ weights


def keys_fit(base: int, n: int) -> bool:
    return base**n < _I64_LIMIT


def zero_sum_search(arrays, target, modulus: int, base: int) -> np.ndarray:
    """All index tuples ``(j_1, ..., j_k)`` with ``A_1[j_1] + ... + A_k[j_k] == target``.

    ``modulus == 0`` means an exact integer equation; entries of every array
    must then lie in ``[0, base)`` and prefixes whose running sum exceeds the
    target in some coordinate are pruned.  Otherwise the equation is taken
    mod ``modulus`` (with ``base == modulus``).  Results are sorted
    lexicographically.
    """
    arrays = [np.ascontiguousarray(a, dtype=np.int64) for a in arrays]
    target = np.asarray(target, dtype=np.int64)
    k = len(arrays)
    n = target.shape[0]
    last = arrays[-1]
    if any(a.shape[0] == 0 for a in arrays):
        return np.empty((0, k), dtype=np.int64)
    use_keys = keys_fit(base, n)
    if use_keys:
        last_keys = encode_keys(last, base)
        order = np.argsort(last_keys, kind="stable")
        sorted_keys = last_keys[order]
    else:
        lookup: dict[tuple, list[int]] = {}
        for idx, row in enumerate(last.tolist()):
            lookup.setdefault(tuple(row), []).append(idx)

    results: list[tuple[int, ...]] = []
    second = arrays[-2]

    def resolve(prefix: tuple[int, ...], partial: np.ndarray) -> None:
        need = target - partial - second
        if modulus:
            need %= modulus
            ok = np.ones(need.shape[0], dtype=bool)
        else:
            ok = np.all((need >= 0) & (need < base), axis=1)
        rows = np.nonzero(ok)[0]
        if rows.size == 0:
            return
        if use_keys:
            keys = encode_keys(need[rows], base)
            lo = np.searchsorted(sorted_keys, keys, side="left")
            hi = np.searchsorted(sorted_keys, keys, side="right")
            for r, a, b in zip(rows.tolist(), lo.tolist(), hi.tolist()):
                for pos in sorted(order[a:b].tolist()):
                    results.append(prefix + (r, pos))
        else:
            for r in rows.tolist():
                for pos in lookup.get(tuple(need[r].tolist()), ()):
                    results.append(prefix + (r, pos))

    def descend(level: int, prefix: tuple[int, ...], partial: np.ndarray) -> None:
        if level == k - 2:
            resolve(prefix, partial)
            return
        A = arrays[level]
        sums = partial + A
        if modulus:
            keep = range(A.shape[0])
        else:
            keep = np.nonzero(np.all(sums <= target, axis=1))[0].tolist()
        for j in keep:
            descend(level + 1, prefix + (j,), sums[j])

    descend(0, (), np.zeros(n, dtype=np.int64))
    if not results:
        return np.empty((0, k), dtype=np.int64)
    out = np.array(results, dtype=np.int64)
    return out
