"""The polynomial form P_G(x) = r! * sum_{edges} prod x_i, its gradient, and
its restrictions to class-constant vectors on complete families."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .hypergraph import Hypergraph, Kind, PartitionSpec


def _check_dim(G: Hypergraph, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] != G.n:
        raise ValueError(f"vector of length {x.shape} does not match n={G.n}")
    if not np.all(np.isfinite(x)):
        raise ValueError("vector has non-finite entries")
    return x


def lp_normalize(x, p: float) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    s = np.sum(np.abs(x) ** p)
    if s == 0:
        raise ValueError("cannot normalize the zero vector")
    return x / s ** (1.0 / p)


def is_lp_normalized(x, p: float, tol: float = 1e-12) -> bool:
    return abs(np.sum(np.abs(np.asarray(x)) ** p) - 1.0) <= tol


def _edge_terms(G, x):
    return np.prod(x[G.edge_array], axis=1) if G.m else np.zeros(0)


def evaluate(G: Hypergraph, x, compensated: bool = False) -> float:
    """P_G(x) by traversal of the edge list."""
    x = _check_dim(G, x)
    if compensated:
        return math.factorial(G.r) * math.fsum(_edge_terms(G, x))
    if G.m == 0:
        return 0.0
    return math.factorial(G.r) * float(kernels.form_values(G.edge_array, x[None, :])[0])


def gradient(G: Hypergraph, x, compensated: bool = False) -> np.ndarray:
    """Partial derivatives of P_G at x."""
    x = _check_dim(G, x)
    fact = math.factorial(G.r)
    if G.m == 0:
        return np.zeros(G.n)
    if compensated:
        buckets = [[] for _ in range(G.n)]
        for e in G.edges:
            for j, v in enumerate(e):
                buckets[v].append(math.prod(x[w] for i, w in enumerate(e) if i != j))
        return fact * np.array([math.fsum(b) for b in buckets])
    _, g = kernels.form_values_grads(G.edge_array, x[None, :])
    return fact * g[0]


def evaluate_batch(G: Hypergraph, X) -> np.ndarray:
    """P_G for every row of X."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if G.m == 0:
        return np.zeros(X.shape[0])
    return math.factorial(G.r) * kernels.form_values(G.edge_array, X)


def evaluate_and_gradient_batch(G: Hypergraph, X):
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if G.m == 0:
        return np.zeros(X.shape[0]), np.zeros_like(X)
    f, g = kernels.form_values_grads(G.edge_array, X)
    fact = math.factorial(G.r)
    return fact * f, fact * g


def hessian(G: Hypergraph, x) -> np.ndarray:
    """Exact Hessian of P_G at x."""
    x = _check_dim(G, x)
    H = np.zeros((G.n, G.n))
    for e in G.edges:
        for a in range(G.r):
            for b in range(a + 1, G.r):
                t = math.prod(x[w] for i, w in enumerate(e) if i != a and i != b)
                H[e[a], e[b]] += t
                H[e[b], e[a]] += t
    return math.factorial(G.r) * H


@dataclass(frozen=True)
class ClassWeights:
    """Weight a_i on every vertex of class i of a complete family."""

    spec: PartitionSpec
    a: tuple[float, ...]

    def __post_init__(self):
        a = tuple(float(v) for v in self.a)
        if len(a) != self.spec.k:
            raise ValueError(f"need {self.spec.k} class weights, got {len(a)}")
        if any(v < 0 for v in a):
            raise ValueError("class weights must be nonnegative")
        object.__setattr__(self, "a", a)

    def expand(self) -> np.ndarray:
        return np.repeat(np.array(self.a), self.spec.sizes)


def elementary_symmetric(y, r: int):
    """e_r of each row of y (last axis), by the usual one-pass recurrence."""
    y = np.asarray(y, dtype=np.float64)
    e = np.zeros(y.shape[:-1] + (r + 1,))
    e[..., 0] = 1.0
    for i in range(y.shape[-1]):
        for j in range(r, 0, -1):
            e[..., j] += y[..., i] * e[..., j - 1]
    return e[..., r]


def reduced_evaluate_multipartite(cw: ClassWeights, r: int) -> float:
    """P_G on the class-constant vector of a complete multipartite graph:
    r! * e_r(n_1 a_1, ..., n_k a_k)."""
    if cw.spec.kind is not Kind.PARTITE:
        raise ValueError("reduced_evaluate_multipartite needs a partite spec")
    y = np.array(cw.spec.sizes, dtype=float) * np.array(cw.a)
    return math.factorial(r) * float(elementary_symmetric(y, r))


def reduced_evaluate_chromatic3(cw: ClassWeights) -> float:
    """P_G / 3! on the class-constant vector of a complete chromatic 3-graph."""
    if cw.spec.kind is not Kind.CHROMATIC:
        raise ValueError("reduced_evaluate_chromatic3 needs a chromatic spec")
    n, a, k = cw.spec.sizes, cw.a, cw.spec.k
    total = 0.0
    for i in range(k):
        for j in range(i + 1, k):
            total += math.comb(n[i], 2) * n[j] * a[i] ** 2 * a[j]
            total += math.comb(n[j], 2) * n[i] * a[j] ** 2 * a[i]
            for m in range(j + 1, k):
                total += n[i] * n[j] * n[m] * a[i] * a[j] * a[m]
    return total


def _binomial_rows(sizes, A, degree):
    """Coefficients C(n_i, c) a_i^c, c = 0..degree, shape (..., k, degree+1)."""
    c = np.arange(degree + 1)
    coef = np.array([[math.comb(s, j) for j in c] for s in sizes], dtype=float)
    return coef * A[..., :, None] ** c


def _truncated_product(rows, degree):
    """Coefficients up to t^degree of prod_i (sum_c rows[..., i, c] t^c)."""
    acc = np.zeros(rows.shape[:-2] + (degree + 1,))
    acc[..., 0] = 1.0
    for i in range(rows.shape[-2]):
        new = np.zeros_like(acc)
        for c in range(degree + 1):
            new[..., c:] += rows[..., i, c, None] * acc[..., : degree + 1 - c]
        acc = new
    return acc


def chromatic_form(sizes, A, r: int):
    """Class-constant restriction of P_G / r! for the complete chromatic
    r-graph with the given class sizes, for each row of A.

    It is the t^r coefficient of prod_i (1 + a_i t)^{n_i}, minus the r-sets
    that lie inside one class.
    """
    A = np.asarray(A, dtype=np.float64)
    rows = _binomial_rows(sizes, A, r)
    inside = sum(math.comb(s, r) * A[..., i] ** r for i, s in enumerate(sizes))
    return _truncated_product(rows, r)[..., r] - inside


def chromatic_form_grad(sizes, A, r: int):
    A = np.asarray(A, dtype=np.float64)
    grad = np.empty_like(A)
    for i, s in enumerate(sizes):
        # d/da_i (1 + a_i t)^{n_i} = n_i t (1 + a_i t)^{n_i - 1}
        others = [sz if j != i else sz - 1 for j, sz in enumerate(sizes)]
        rows = _binomial_rows(others, A, r - 1)
        coef = _truncated_product(rows, r - 1)[..., r - 1]
        grad[..., i] = s * coef - r * math.comb(s, r) * A[..., i] ** (r - 1)
    return grad


def multipartite_form(sizes, A, r: int):
    """e_r(n_1 a_1, ..., n_k a_k) for each row of A (P_G / r!)."""
    return elementary_symmetric(np.asarray(A) * np.asarray(sizes, dtype=float), r)


def multipartite_form_grad(sizes, A, r: int):
    A = np.asarray(A, dtype=np.float64)
    sizes = np.asarray(sizes, dtype=float)
    Y = A * sizes
    grad = np.empty_like(A)
    for i in range(A.shape[-1]):
        rest = np.delete(Y, i, axis=-1)
        grad[..., i] = sizes[i] * elementary_symmetric(rest, r - 1)
    return grad


def reduced_evaluate_chromatic(cw: ClassWeights, r: int) -> float:
    """P_G on the class-constant vector of a complete chromatic r-graph."""
    if cw.spec.kind is not Kind.CHROMATIC:
        raise ValueError("reduced_evaluate_chromatic needs a chromatic spec")
    return math.factorial(r) * float(chromatic_form(cw.spec.sizes, np.array(cw.a), r))
