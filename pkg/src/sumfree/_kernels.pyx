# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels; see ``_kernels_py`` for the contract."""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free

cnp.import_array()

ctypedef long long i64
ctypedef unsigned long long u64

cdef extern from *:
    """
    static inline unsigned long long sf_mulmod(unsigned long long a, unsigned long long b,
                                               unsigned long long p) {
        return (unsigned long long)(((unsigned __int128)a * b) % p);
    }
    """
    u64 sf_mulmod(u64 a, u64 b, u64 p) nogil


def hash_images(X, coeffs, long long P, long long offset):
    cdef i64[:, ::1] Xv = np.ascontiguousarray(X, dtype=np.int64)
    cdef i64[::1] cv = np.ascontiguousarray(np.asarray(coeffs, dtype=np.int64) % P)
    cdef Py_ssize_t L = Xv.shape[0], n = Xv.shape[1], i, j
    out = np.empty(L, dtype=np.int64)
    cdef i64[::1] ov = out
    cdef u64 p = <u64>P, acc, off = <u64>(offset % P), a
    with nogil:
        for i in range(L):
            acc = off
            for j in range(n):
                a = <u64>(Xv[i, j] % P + P) % p
                acc = (acc + sf_mulmod(a, <u64>cv[j], p)) % p
            ov[i] = <i64>acc
    return out


cdef inline Py_ssize_t _lower_bound(i64* keys, Py_ssize_t size, i64 key) nogil:
    cdef Py_ssize_t lo = 0, hi = size, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if keys[mid] < key:
            lo = mid + 1
        else:
            hi = mid
    return lo


def zero_sum_search(arrays, target, long long modulus, long long base):
    cdef Py_ssize_t k = len(arrays)
    cdef i64[::1] tv = np.ascontiguousarray(target, dtype=np.int64)
    cdef Py_ssize_t n = tv.shape[0]
    if any(np.asarray(a).shape[0] == 0 for a in arrays):
        return np.empty((0, k), dtype=np.int64)
    if float(base) ** n >= 2.0 ** 63:
        from sumfree import _kernels_py
        return _kernels_py.zero_sum_search(arrays, target, modulus, base)

    mats = [np.ascontiguousarray(a, dtype=np.int64) for a in arrays]
    sizes_np = np.array([m.shape[0] for m in mats], dtype=np.int64)
    cdef i64[::1] sizes = sizes_np
    # flatten every array into one buffer with per-array offsets
    flat_np = np.ascontiguousarray(np.concatenate([m.ravel() for m in mats]))
    cdef i64[::1] flat = flat_np
    offs_np = np.zeros(k, dtype=np.int64)
    offs_np[1:] = np.cumsum(sizes_np[:-1] * n)
    cdef i64[::1] offs = offs_np

    weights_np = base ** np.arange(n, dtype=np.int64)
    last_keys = mats[k - 1] @ weights_np
    order_np = np.ascontiguousarray(np.argsort(last_keys, kind="stable").astype(np.int64))
    keys_np = np.ascontiguousarray(last_keys[order_np])
    cdef i64[::1] order = order_np
    cdef i64[::1] skeys = keys_np
    cdef i64[::1] wts = weights_np
    cdef Py_ssize_t nlast = sizes[k - 1]

    partial_np = np.zeros((k, n), dtype=np.int64)
    cdef i64[:, ::1] partial = partial_np
    idx_np = np.zeros(k, dtype=np.int64)
    cdef i64[::1] idx = idx_np

    out = []
    cdef Py_ssize_t level = 0, c, pos, lo
    cdef i64 v, key, need
    cdef bint ok
    cdef i64 base_off

    idx[0] = -1
    while level >= 0:
        idx[level] += 1
        if idx[level] >= sizes[level]:
            level -= 1
            continue
        base_off = offs[level] + idx[level] * n
        ok = True
        for c in range(n):
            v = flat[base_off + c]
            if level > 0:
                v += partial[level - 1, c]
            if modulus:
                v %= modulus
            elif v > tv[c]:
                ok = False
                break
            partial[level, c] = v
        if not ok:
            continue
        if level < k - 2:
            level += 1
            idx[level] = -1
            continue
        # level == k-2: the last member is forced
        key = 0
        for c in range(n):
            need = tv[c] - partial[level, c]
            if modulus:
                need %= modulus
                if need < 0:
                    need += modulus
            elif need < 0 or need >= base:
                ok = False
                break
            key += need * wts[c]
        if not ok:
            continue
        lo = _lower_bound(&skeys[0], nlast, key)
        matches = []
        pos = lo
        while pos < nlast and skeys[pos] == key:
            matches.append(order[pos])
            pos += 1
        if matches:
            prefix = tuple(idx_np[: k - 1].tolist())
            for p in sorted(matches):
                out.append(prefix + (p,))
    if not out:
        return np.empty((0, k), dtype=np.int64)
    return np.array(out, dtype=np.int64)
