"""Kernel dispatch: the compiled extension when available, numpy otherwise.

Set ``SUMFREE_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from sumfree import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("SUMFREE_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from sumfree import _kernels as _compiled
    except ImportError:  # extension not built
        pass
    else:
        _impl = _compiled
        BACKEND = "cython"

hash_images = _impl.hash_images
zero_sum_search = _impl.zero_sum_search
encode_keys = _kernels_py.encode_keys
keys_fit = _kernels_py.keys_fit

__all__ = ["BACKEND", "hash_images", "zero_sum_search", "encode_keys", "keys_fit"]
