"""Hot loops with a numba back-end and a pure-numpy fallback.

The numba path is used unless ``STRUCTURA_DISABLE_NUMBA`` is set to a truthy
value or numba fails to import.  Both back-ends stay importable as
``kernels.numpy_backend`` / ``kernels.numba_backend`` for cross-checking.
"""
from __future__ import annotations

import os

from . import _numpy as numpy_backend

_flag = os.environ.get("STRUCTURA_DISABLE_NUMBA", "").strip().lower()

try:
    from . import _numba as numba_backend
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba_backend = None

USE_NUMBA = numba_backend is not None and _flag not in ("1", "true", "yes", "on")

backend = numba_backend if USE_NUMBA else numpy_backend
BACKEND_NAME = "numba" if USE_NUMBA else "numpy"

mask_features = backend.mask_features
induced_submasks = backend.induced_submasks
minor_level = backend.minor_level
upward_closure = backend.upward_closure
canon_search = backend.canon_search
poisson_inversion = backend.poisson_inversion

__all__ = [
    "BACKEND_NAME",
    "USE_NUMBA",
    "canon_search",
    "induced_submasks",
    "mask_features",
    "minor_level",
    "numba_backend",
    "numpy_backend",
    "poisson_inversion",
    "upward_closure",
]
