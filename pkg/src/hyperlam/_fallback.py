"""Pure numpy versions of the compiled kernels in ``_kernels.pyx``."""

import numpy as np


def form_values(edges, X, out):
    if edges.shape[0] == 0:
        out[:] = 0.0
        return
    out[:] = np.prod(X[:, edges], axis=2).sum(axis=1)


def form_values_grads(edges, X, out, G):
    R, n = X.shape
    m, r = edges.shape
    if m == 0:
        out[:] = 0.0
        G[:] = 0.0
        return
    vals = X[:, edges]  # (R, m, r)
    ones = np.ones((R, m, 1))
    prefix = np.cumprod(np.concatenate([ones, vals[:, :, :-1]], axis=2), axis=2)
    suffix = np.cumprod(np.concatenate([ones, vals[:, :, :0:-1]], axis=2), axis=2)[:, :, ::-1]
    others = prefix * suffix
    out[:] = (prefix[:, :, -1] * vals[:, :, -1]).sum(axis=1)
    flat = (np.arange(R)[:, None, None] * n + edges[None, :, :]).ravel()
    G[:] = np.bincount(flat, weights=others.ravel(), minlength=R * n).reshape(R, n)
