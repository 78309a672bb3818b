# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled edge-list kernels for the polynomial form.

Both functions compute the raw form sum_{edges} prod_{i in edge} x_i (no r!
factor) for every row of a batch. ``_fallback`` mirrors the signatures.
"""

from libc.stdint cimport int64_t

cdef enum:
    MAX_R = 64


def form_values(const int64_t[:, ::1] edges, const double[:, ::1] X, double[::1] out):
    cdef Py_ssize_t R = X.shape[0], m = edges.shape[0], r = edges.shape[1]
    cdef Py_ssize_t b, e, j
    cdef double total, prod
    for b in range(R):
        total = 0.0
        for e in range(m):
            prod = 1.0
            for j in range(r):
                prod *= X[b, edges[e, j]]
            total += prod
        out[b] = total


def form_values_grads(const int64_t[:, ::1] edges, const double[:, ::1] X,
                      double[::1] out, double[:, ::1] G):
    cdef Py_ssize_t R = X.shape[0], n = X.shape[1]
    cdef Py_ssize_t m = edges.shape[0], r = edges.shape[1]
    cdef Py_ssize_t b, e, j, i
    cdef double total
    # prefix[j] = x_0 * ... * x_{j-1}; suffix[j] = x_j * ... * x_{r-1}
    cdef double prefix[MAX_R + 1]
    cdef double suffix[MAX_R + 1]
    if r > MAX_R:
        raise ValueError(f"uniformity {r} exceeds compiled limit {MAX_R}")
    for b in range(R):
        for i in range(n):
            G[b, i] = 0.0
        total = 0.0
        for e in range(m):
            prefix[0] = 1.0
            for j in range(r):
                prefix[j + 1] = prefix[j] * X[b, edges[e, j]]
            suffix[r] = 1.0
            for j in range(r - 1, -1, -1):
                suffix[j] = suffix[j + 1] * X[b, edges[e, j]]
            total += prefix[r]
            for j in range(r):
                G[b, edges[e, j]] += prefix[j] * suffix[j + 1]
        out[b] = total
