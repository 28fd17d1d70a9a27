import os

import pytest


@pytest.fixture(params=["compiled", "python"])
def kernel_impl(request):
    """Both kernel implementations, so every kernel test runs against each."""
    from sumfree import _kernels_py

    if request.param == "python":
        return _kernels_py
    try:
        from sumfree import _kernels
    except ImportError:
        pytest.skip("compiled kernel not built")
    return _kernels


def pytest_report_header(config):
    from sumfree import kernels

    return f"sumfree kernel backend: {kernels.BACKEND} (SUMFREE_PURE_PYTHON={os.environ.get('SUMFREE_PURE_PYTHON', '')})"
