"""Backend selection for the edge-list kernels.

The compiled extension is used when it was built; otherwise the numpy
fallback is used. Setting ``HYPERLAM_BACKEND=python`` forces the fallback.
"""

import os

import numpy as np

from . import _fallback

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKENDS = {"python": _fallback}
if _compiled is not None:
    BACKENDS["cython"] = _compiled

if os.environ.get("HYPERLAM_BACKEND", "").lower() == "python" or _compiled is None:
    BACKEND = "python"
else:
    BACKEND = "cython"


def _impl(backend):
    return BACKENDS[backend or BACKEND]


def form_values(edges, X, backend=None):
    """Raw form values (no r! factor) for each row of ``X``."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    out = np.empty(X.shape[0])
    _impl(backend).form_values(edges, X, out)
    return out


def form_values_grads(edges, X, backend=None):
    """Raw form values and gradients for each row of ``X``."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    out = np.empty(X.shape[0])
    G = np.empty_like(X)
    _impl(backend).form_values_grads(edges, X, out, G)
    return out, G
