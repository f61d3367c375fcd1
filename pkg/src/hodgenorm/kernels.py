"""Backend selection for the hot kernels.

The compiled extension ``hodgenorm._ckernels`` is used when it was built and
``HODGENORM_PURE_PYTHON`` is unset; otherwise the numpy versions are used.
"""

from __future__ import annotations

import os

from . import _pykernels

BACKEND = "python"
cone_integrand = _pykernels.cone_integrand
cheeger_scan = _pykernels.cheeger_scan

if not os.environ.get("HODGENORM_PURE_PYTHON"):
    try:
        from . import _ckernels
    except ImportError:  # extension not built
        _ckernels = None
    if _ckernels is not None:
        BACKEND = "cython"
        cone_integrand = _ckernels.cone_integrand
        cheeger_scan = _ckernels.cheeger_scan

__all__ = ["BACKEND", "cone_integrand", "cheeger_scan"]
