"""Uniform hypergraphs, the complete partite/chromatic families and
exact partite/chromatic decision procedures."""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

DEFAULT_NODE_BUDGET = 10**7


class SearchBudgetExceeded(RuntimeError):
    """Raised when a backtracking search visits more nodes than allowed."""


class Kind(enum.Enum):
    PARTITE = "partite"
    CHROMATIC = "chromatic"


@dataclass(frozen=True)
class PartitionSpec:
    """Class sizes (n_1, ..., n_k) of a complete partite or chromatic family."""

    sizes: tuple[int, ...]
    kind: Kind = Kind.PARTITE

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        if not sizes:
            raise ValueError("a partition needs at least one class")
        if any(s < 1 for s in sizes):
            raise ValueError(f"class sizes must be positive, got {sizes}")
        object.__setattr__(self, "sizes", sizes)
        object.__setattr__(self, "kind", Kind(self.kind))

    @property
    def k(self) -> int:
        return len(self.sizes)

    @property
    def n(self) -> int:
        return sum(self.sizes)

    def labels(self) -> np.ndarray:
        """Class index of every vertex; class i occupies a contiguous block."""
        return np.repeat(np.arange(self.k), self.sizes)

    def classes(self) -> list[tuple[int, ...]]:
        out, start = [], 0
        for s in self.sizes:
            out.append(tuple(range(start, start + s)))
            start += s
        return out

    def is_balanced(self) -> bool:
        return max(self.sizes) - min(self.sizes) <= 1


@dataclass(frozen=True)
class Hypergraph:
    """An r-uniform hypergraph on vertices 0..n-1.

    Edges are canonicalized on construction: each edge becomes a sorted
    tuple and the edge list is sorted. Repeated vertices, out-of-range
    vertices and duplicate edges raise ``ValueError``.
    """

    r: int
    n: int
    edges: tuple[tuple[int, ...], ...] = ()
    warning: str | None = field(default=None, compare=False)

    def __post_init__(self):
        r, n = int(self.r), int(self.n)
        if r < 2:
            raise ValueError(f"uniformity must be >= 2, got {r}")
        if n < r:
            raise ValueError(f"need n >= r, got n={n}, r={r}")
        canon = []
        for e in self.edges:
            t = tuple(sorted(int(v) for v in e))
            if len(t) != r:
                raise ValueError(f"edge {tuple(e)} does not have {r} vertices")
            if len(set(t)) != r:
                raise ValueError(f"repeated vertex in edge {tuple(e)}")
            if t[0] < 0 or t[-1] >= n:
                raise ValueError(f"edge {tuple(e)} has a vertex outside [0, {n})")
            canon.append(t)
        canon.sort()
        for a, b in zip(canon, canon[1:]):
            if a == b:
                raise ValueError(f"duplicate edge {a}")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", tuple(canon))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_array(self) -> np.ndarray:
        arr = np.array(self.edges, dtype=np.int64).reshape(len(self.edges), self.r)
        arr.setflags(write=False)
        return arr

    def degrees(self) -> np.ndarray:
        return np.bincount(self.edge_array.ravel(), minlength=self.n)

    def relabel(self, perm) -> Hypergraph:
        """Image under the vertex map ``v -> perm[v]``."""
        perm = list(perm)
        if sorted(perm) != list(range(self.n)):
            raise ValueError("perm must be a permutation of range(n)")
        return Hypergraph(self.r, self.n, [tuple(perm[v] for v in e) for e in self.edges])

    def without_edge(self, edge) -> Hypergraph:
        edge = tuple(sorted(edge))
        if edge not in set(self.edges):
            raise ValueError(f"{edge} is not an edge")
        return Hypergraph(self.r, self.n, [e for e in self.edges if e != edge])

    def is_automorphism(self, perm) -> bool:
        return set(self.relabel(perm).edges) == set(self.edges)

    def transposition_is_automorphism(self, u: int, v: int) -> bool:
        perm = list(range(self.n))
        perm[u], perm[v] = v, u
        return self.is_automorphism(perm)

    def __repr__(self):
        return f"Hypergraph(r={self.r}, n={self.n}, m={self.m})"


def balanced_sizes(n: int, k: int) -> tuple[int, ...]:
    """Sizes floor(n/k) or ceil(n/k), larger classes first."""
    q, rem = divmod(n, k)
    return (q + 1,) * rem + (q,) * (k - rem)


def complete_graph(n: int, r: int) -> Hypergraph:
    if r < 2 or n < r:
        raise ValueError(f"complete_graph needs n >= r >= 2, got n={n}, r={r}")
    return Hypergraph(r, n, itertools.combinations(range(n), r))


def complete_multipartite(spec: PartitionSpec, r: int) -> Hypergraph:
    """Every r-set meeting each class at most once.

    With fewer than r classes the result has no edges and carries a warning.
    """
    if spec.kind is not Kind.PARTITE:
        raise ValueError("complete_multipartite needs a partite PartitionSpec")
    if spec.n < r:
        raise ValueError(f"need n >= r, got n={spec.n}, r={r}")
    if spec.k < r:
        return Hypergraph(r, spec.n, (), warning=f"{spec.k} classes < r={r}: no edges")
    classes = spec.classes()
    edges = []
    for chosen in itertools.combinations(classes, r):
        edges.extend(itertools.product(*chosen))
    return Hypergraph(r, spec.n, edges)


def complete_chromatic(spec: PartitionSpec, r: int) -> Hypergraph:
    """Every r-set not contained in a single class."""
    if spec.kind is not Kind.CHROMATIC:
        raise ValueError("complete_chromatic needs a chromatic PartitionSpec")
    if spec.n < r:
        raise ValueError(f"need n >= r, got n={spec.n}, r={r}")
    labels = spec.labels()
    # classes are contiguous, so a sorted edge lies in one class iff its ends do
    edges = [e for e in itertools.combinations(range(spec.n), r)
             if labels[e[0]] != labels[e[-1]]]
    return Hypergraph(r, spec.n, edges)


def turan_hypergraph(n: int, k: int, r: int) -> Hypergraph:
    """T_k^r(n): complete k-partite r-graph with balanced parts."""
    if not (k >= r >= 2 and n >= k):
        raise ValueError(f"turan_hypergraph needs k >= r >= 2 and n >= k, got n={n}, k={k}, r={r}")
    return complete_multipartite(PartitionSpec(balanced_sizes(n, k), Kind.PARTITE), r)


def balanced_chromatic(n: int, k: int, r: int) -> Hypergraph:
    """Q_k^r(n): complete k-chromatic r-graph with balanced classes."""
    if not (k >= 2 and r >= 2 and n >= k):
        raise ValueError(f"balanced_chromatic needs k >= 2, r >= 2, n >= k, got n={n}, k={k}, r={r}")
    return complete_chromatic(PartitionSpec(balanced_sizes(n, k), Kind.CHROMATIC), r)


def binom(m: int, r: int) -> int:
    """C(m, r), zero when m < r."""
    return math.comb(m, r) if m >= r else 0


def _vertex_order(G: Hypergraph) -> list[int]:
    deg = G.degrees()
    return sorted(range(G.n), key=lambda v: (-deg[v], v))


def _backtrack(G: Hypergraph, k: int, conflict, node_budget: int):
    order = _vertex_order(G)
    incident = [[] for _ in range(G.n)]
    for e in G.edges:
        for v in e:
            incident[v].append(e)
    color = [-1] * G.n
    nodes = 0

    def rec(pos, used):
        nonlocal nodes
        if pos == G.n:
            return True
        v = order[pos]
        # a fresh color is only tried once (the next unused one)
        for c in range(min(used + 1, k)):
            nodes += 1
            if nodes > node_budget:
                raise SearchBudgetExceeded(f"search exceeded {node_budget} nodes")
            color[v] = c
            if not any(conflict(e, color, c) for e in incident[v]):
                if rec(pos + 1, max(used, c + 1)):
                    return True
            color[v] = -1
        return False

    if rec(0, 0):
        return True, tuple(color)
    return False, None


def _partite_conflict(edge, color, c):
    return sum(1 for w in edge if color[w] == c) > 1


def _chromatic_conflict(edge, color, c):
    return all(color[w] == c for w in edge)


def is_k_partite(G: Hypergraph, k: int, node_budget: int = DEFAULT_NODE_BUDGET):
    """Exact test whether every edge can meet each of <= k classes at most once.

    Returns ``(True, labels)`` with a class label per vertex, or ``(False, None)``.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    return _backtrack(G, k, _partite_conflict, node_budget)


def is_k_chromatic(G: Hypergraph, k: int, node_budget: int = DEFAULT_NODE_BUDGET):
    """Exact test whether V splits into <= k classes none containing an edge."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return _backtrack(G, k, _chromatic_conflict, node_budget)


def size_vectors(n: int, k: int):
    """Nondecreasing k-tuples of positive integers summing to n."""
    def rec(remaining, parts, lo):
        if parts == 1:
            if remaining >= lo:
                yield (remaining,)
            return
        for first in range(lo, remaining // parts + 1):
            for rest in rec(remaining - first, parts - 1, first):
                yield (first,) + rest

    if k < 1 or n < k:
        return
    yield from rec(n, k, 1)
