"""Closed-form upper bounds on lambda^(p) for partite and chromatic
r-graphs, extremal values of complete graphs, and the cubic function R.

All values are doubles. Binomials of real arguments are falling-factorial
products, never factorial ratios.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hypergraph import Kind, PartitionSpec, binom


@dataclass
class BoundReport:
    bound_name: str
    value: float
    achieved_lambda: float | None = None
    slack: float | None = None
    equality_case: bool | None = None

    def __post_init__(self):
        if self.achieved_lambda is not None and self.slack is None:
            self.slack = self.value - self.achieved_lambda

    def to_dict(self) -> dict:
        return {"bound_name": self.bound_name, "value": self.value,
                "achieved_lambda": self.achieved_lambda, "slack": self.slack,
                "equality_case": self.equality_case}


def real_binomial(x: float, r: int) -> float:
    """x (x-1) ... (x-r+1) / r! for real x."""
    out = 1.0
    for j in range(r):
        out *= (x - j) / (j + 1)
    return out


def truncated_binomial(x: float, r: int) -> float:
    """Convex extension of C(x, r): the falling-factorial polynomial for
    x > r-1, and 0 below."""
    return real_binomial(x, r) if x > r - 1 else 0.0


def _check(cond, msg):
    if not cond:
        raise ValueError(msg)


def _kr(k, r):
    _check(r >= 2 and k >= r, f"need k >= r >= 2, got k={k}, r={r}")


def bound_l1(k: int, r: int) -> float:
    """Largest Lagrangian of a k-partite r-graph: r! C(k,r) k^-r."""
    _kr(k, r)
    return math.factorial(r) * math.comb(k, r) / k**r


def bound_b1(k: int, r: int, p: float, edges: int) -> float:
    _kr(k, r)
    _check(p > 1, "bound_b1 needs p > 1")
    _check(edges >= 0, "edge count must be nonnegative")
    return math.factorial(r) * math.comb(k, r) ** (1 / p) * k ** (-r / p) * edges ** (1 - 1 / p)


def bound_b2(k: int, r: int, p: float, n: int) -> float:
    _kr(k, r)
    _check(p > 1, "bound_b2 needs p > 1")
    _check(n >= 1, "n must be positive")
    return math.factorial(r) * math.comb(k, r) / k**r * n ** (r - r / p)


def bound_b3(k: int, r: int, p: float, edges: int) -> float:
    _check(k >= 2 and r >= 2, f"need k >= 2 and r >= 2, got k={k}, r={r}")
    _check(p >= 1, "p must be >= 1")
    _check(edges >= 0, "edge count must be nonnegative")
    return (1 - k ** (1 - r)) ** (1 / p) * (math.factorial(r) * edges) ** (1 - 1 / p)


def bound_b4(k: int, r: int, p: float, n: int) -> float:
    _check(k >= 2 and r >= 2, f"need k >= 2 and r >= 2, got k={k}, r={r}")
    _check(p >= 1, "p must be >= 1")
    _check(n >= 1, "n must be positive")
    return (1 - k ** (1 - r)) * n ** (r - r / p)


def bound_pth4(n: int, r: int, p: float) -> float:
    """lambda^(p) of the complete r-graph on n vertices: r! C(n,r) n^(-r/p)."""
    _check(r >= 2 and n >= r, f"need n >= r >= 2, got n={n}, r={r}")
    _check(p >= 1, "p must be >= 1")
    return math.factorial(r) * math.comb(n, r) * n ** (-r / p)


def bound_co2(n: int, k: int, r: int, p: float) -> float:
    """r! (C(n,r) - k C(n/k, r)) n^(-r/p) with the truncated real binomial."""
    _check(k >= 2 and r >= 2 and n >= r, f"invalid (n, k, r) = ({n}, {k}, {r})")
    _check(p >= 1, "p must be >= 1")
    return math.factorial(r) * (math.comb(n, r) - k * truncated_binomial(n / k, r)) * n ** (-r / p)


def bound_th4(n: int, k: int, p: float) -> float:
    """Upper bound for k-chromatic 3-graphs: the complete 3-graph value when
    n <= 2k, the balanced chromatic edge count otherwise."""
    _check(k >= 2 and n >= 3, f"need k >= 2 and n >= 3, got n={n}, k={k}")
    _check(p >= 1, "p must be >= 1")
    if n <= 2 * k:
        return bound_pth4(n, 3, p)
    return bound_co2(n, k, 3, p)


def th4_equality_expected(sizes) -> bool:
    """Whether the complete chromatic 3-graph with these class sizes attains
    bound_th4: it is the complete 3-graph (all classes of size <= 2, which
    needs n <= 2k), or all classes have size n/k."""
    return max(sizes) <= 2 or len(set(sizes)) == 1


def R_function(n_vec, a_vec) -> float:
    """sum_{i<j} (C(n_i,2) n_j a_i^2 a_j + C(n_j,2) n_i a_j^2 a_i)
    + sum_{i<j<m} n_i n_j n_m a_i a_j a_m, for real n_i >= 1."""
    n = np.asarray(n_vec, dtype=float)
    a = np.asarray(a_vec, dtype=float)
    if n.shape != a.shape or n.ndim != 1:
        raise ValueError("n_vec and a_vec must be vectors of equal length")
    if n.size < 2:
        raise ValueError("R needs at least two classes")
    if np.any(n < 1):
        raise ValueError("class sizes must be >= 1")
    if np.any(a < 0):
        raise ValueError("weights must be nonnegative")
    return float(R_batch(n[None], a[None])[0])


def R_batch(N, A):
    """R for every row of (N, A); no validation.

    With y_i = n_i a_i and S = sum y_i it equals
    sum_i c_i y_i^2 (S - y_i) + e_3(y), c_i = (1 - 1/n_i) / 2.
    """
    N = np.asarray(N, dtype=float)
    Y = N * np.asarray(A, dtype=float)
    S = Y.sum(axis=-1, keepdims=True)
    c = 0.5 * (1.0 - 1.0 / N)
    p1, p2, p3 = S[..., 0], (Y**2).sum(axis=-1), (Y**3).sum(axis=-1)
    e3 = (p1**3 - 3 * p1 * p2 + 2 * p3) / 6
    return (c * Y**2 * (S - Y)).sum(axis=-1) + e3


def R_bound(n: float, k: int, s: float) -> float:
    """(C(n,3) - k C(n/k,3)) s^3 / n^3 with real binomials.

    The binomial of n/k is the plain cubic, not the truncated one: R attains
    this value at constant (n_i, a_i) for every n/k >= 1.
    """
    _check(k >= 2 and n >= k, f"need n >= k >= 2, got n={n}, k={k}")
    return (real_binomial(n, 3) - k * real_binomial(n / k, 3)) * s**3 / n**3


def chromatic_edge_count(spec: PartitionSpec, r: int) -> int:
    return binom(spec.n, r) - sum(binom(s, r) for s in spec.sizes)


def multipartite_edge_count(spec: PartitionSpec, r: int) -> int:
    """e_r of the class sizes, exactly."""
    e = [1] + [0] * r
    for s in spec.sizes:
        for j in range(r, 0, -1):
            e[j] += s * e[j - 1]
    return e[r]


def edge_count(spec: PartitionSpec, r: int) -> int:
    if spec.kind is Kind.PARTITE:
        return multipartite_edge_count(spec, r)
    return chromatic_edge_count(spec, r)


def partite_reports(spec: PartitionSpec, r: int, p: float, lam: float) -> list[BoundReport]:
    """b1 and b2 against an achieved value on a k-partite graph."""
    k, n, e = spec.k, spec.n, multipartite_edge_count(spec, r)
    balanced_div = spec.is_balanced() and n % k == 0
    return [BoundReport("b1", bound_b1(k, r, p, e), lam),
            BoundReport("b2", bound_b2(k, r, p, n), lam, equality_case=balanced_div)]


def chromatic_reports(spec: PartitionSpec, r: int, p: float, lam: float) -> list[BoundReport]:
    """b3, b4 and, where they apply, the complete-graph and balanced bounds."""
    k, n, e = spec.k, spec.n, chromatic_edge_count(spec, r)
    out = []
    if k >= 2:
        out.append(BoundReport("b3", bound_b3(k, r, p, e), lam))
        out.append(BoundReport("b4", bound_b4(k, r, p, n), lam, equality_case=False))
    if r == 3 and k >= 2 and n >= 3:
        out.append(BoundReport("th4", bound_th4(n, k, p), lam,
                               equality_case=th4_equality_expected(spec.sizes)))
    elif n > (r - 1) * k:
        out.append(BoundReport("co2", bound_co2(n, k, r, p), lam,
                               equality_case=n % k == 0 and spec.is_balanced()))
    if n <= (r - 1) * k:
        out.append(BoundReport("pth4", bound_pth4(n, r, p), lam,
                               equality_case=all(s < r for s in spec.sizes)))
    return out
