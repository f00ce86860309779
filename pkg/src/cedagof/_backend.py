"""Pick the compiled kernel when available; ``CEDAGOF_PURE_PYTHON=1`` forces numpy."""

import os

from . import _pykernels

BACKEND = "python"
ward_linkage = _pykernels.ward_linkage

if not os.environ.get("CEDAGOF_PURE_PYTHON"):
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        BACKEND = "cython"
        ward_linkage = _ckernels.ward_linkage


def get_kernels(name=None):
    """Return the ``ward_linkage`` implementation for ``name`` (or the active one)."""
    if name is None:
        return ward_linkage
    if name == "python":
        return _pykernels.ward_linkage
    if name == "cython":
        from . import _ckernels

        return _ckernels.ward_linkage
    raise ValueError(f"unknown backend {name!r}")
