"""The p-spectral radius: maximum of P_G over the nonnegative unit l^p sphere.

``p_spectral_radius`` handles p > 1 and ``lagrangian`` handles p = 1 on any
hypergraph by multi-start ascent; the reported value is a certified lower
bound (it is attained by the returned witness). ``symmetric_solve`` solves
complete partite/chromatic families exactly through their class-constant
reduction, and ``brute_force_oracle`` brackets the maximum on tiny graphs.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from . import _ascent, polyform
from .hypergraph import Hypergraph, Kind, PartitionSpec

LOWER_BOUND = "lower bound"
SYMMETRIC = "symmetric"
ORACLE = "oracle"

POLISH_SWITCH = 1e-7
AGREE_TOL = 1e-8
TIE_RTOL = 1e-12


@dataclass(frozen=True)
class SolverConfig:
    p: float = 2.0
    tol: float = 1e-10
    max_iter: int = 100_000
    restarts: int = 32
    seed: int = 0
    step_rule: str = "armijo"
    fixed_step: float = 1e-2
    polish: bool = True

    def __post_init__(self):
        if not self.p >= 1:
            raise ValueError(f"p must be >= 1, got {self.p}")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.step_rule not in ("armijo", "fixed"):
            raise ValueError(f"unknown step rule {self.step_rule!r}")


@dataclass
class SpectralResult:
    lam: float
    witness: np.ndarray
    p: float
    kkt_residual: float
    iterations: int
    converged: bool
    restarts_agreeing: int
    certification: str = LOWER_BOUND
    method: str = ""
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "lambda": float(self.lam),
            "witness": [float(v) for v in self.witness],
            "p": float(self.p),
            "kkt_residual": float(self.kkt_residual),
            "iterations": int(self.iterations),
            "converged": bool(self.converged),
            "restarts_agreeing": int(self.restarts_agreeing),
            "certification": self.certification,
            "method": self.method,
        }


def kkt_residual(G: Hypergraph, x, p: float) -> float:
    """First-order optimality residual of a normalized nonnegative x.

    With lam = P_G(x): max over the support of |grad_i - r*lam*x_i^(p-1)|,
    and over zero entries the positive part of the same expression (the
    threshold is 0 for p > 1 and r*lam for p = 1).
    """
    x = np.asarray(x, dtype=np.float64)
    f = polyform.evaluate(G, x)
    g = polyform.gradient(G, x)
    return float(_ascent.kkt_residuals(x[None], np.array([f]), g[None], p, G.r)[0])


def _starts(n, restarts, p, rng, degree_weights=None):
    """Restart 0 uniform, restart 1 degree-weighted, then Dirichlet points."""
    W = np.empty((restarts, n))
    W[0] = 1.0 / n
    if restarts > 1:
        d = np.ones(n) if degree_weights is None else np.asarray(degree_weights, dtype=float)
        W[1] = d / d.sum() if d.sum() > 0 else 1.0 / n
    if restarts > 2:
        W[2:] = rng.dirichlet(np.ones(n), size=restarts - 2)
    # W lies on the simplex; w^(1/p) lies on the l^p sphere
    return W if p == 1 else W ** (1.0 / p)


def _run(fg, hess, X0, p, degree, cfg: SolverConfig):
    """Ascent on all restarts, polish of the leading candidates, and the
    deterministic merge. Returns (x, f, residual, iterations, agreeing)."""
    stop = max(cfg.tol, POLISH_SWITCH) if cfg.polish else cfg.tol
    X, F, G, res, iters = _ascent.gradient_ascent(
        fg, X0, p, degree, stop, cfg.max_iter, cfg.step_rule, cfg.fixed_step)
    if cfg.polish:
        best = F.max()
        lead = np.flatnonzero(F >= best - 1e-6 * max(1.0, abs(best)))
        for i in lead:
            x, f, g, r, _ = _ascent.newton_polish(fg, hess, X[i], p, degree, cfg.tol)
            if r > cfg.tol and iters[i] < cfg.max_iter:
                # the polish stalled; let the ascent take over again
                xa, fa, ga, ra, ia = _ascent.gradient_ascent(
                    fg, x[None], p, degree, cfg.tol, cfg.max_iter - iters[i],
                    cfg.step_rule, cfg.fixed_step)
                iters[i] += ia[0]
                if fa[0] >= f:
                    x, f, r = xa[0], fa[0], ra[0]
            X[i], F[i], res[i] = x, f, r
    best = F.max()
    tied = np.flatnonzero(F >= best - TIE_RTOL * max(1.0, abs(best)))
    pick = min(tied, key=lambda i: (tuple(np.round(X[i], 10)), i))
    agreeing = int(np.sum(F >= best - AGREE_TOL))
    return X[pick], F[pick], res[pick], int(iters.sum()), agreeing


def _graph_fg(G):
    return lambda X: polyform.evaluate_and_gradient_batch(G, X)


def _empty_result(G, p, method):
    return SpectralResult(0.0, np.zeros(G.n), p, 0.0, 0, True, 0, LOWER_BOUND, method)


def p_spectral_radius(G: Hypergraph, cfg: SolverConfig) -> SpectralResult:
    """Best-of-restarts maximizer of P_G on the nonnegative l^p sphere, p > 1."""
    if cfg.p <= 1:
        raise ValueError("p_spectral_radius needs p > 1; use lagrangian for p = 1")
    if G.m == 0:
        return _empty_result(G, cfg.p, "sphere-ascent")
    rng = np.random.default_rng(cfg.seed)
    fg = _graph_fg(G)
    X0 = _starts(G.n, cfg.restarts, cfg.p, rng, G.degrees())
    x, f, res, iters, agree = _run(fg, lambda v: polyform.hessian(G, v), X0, cfg.p, G.r, cfg)
    x = polyform.lp_normalize(x, cfg.p)
    lam = polyform.evaluate(G, x)
    res = kkt_residual(G, x, cfg.p)
    return SpectralResult(lam, x, cfg.p, res, iters, res <= cfg.tol, agree,
                          LOWER_BOUND, "sphere-ascent")


def _share_edge_matrix(G):
    A = np.zeros((G.n, G.n), dtype=bool)
    for e in G.edges:
        for u, v in itertools.combinations(e, 2):
            A[u, v] = A[v, u] = True
    return A


def mass_shift(G: Hypergraph, x, A=None) -> np.ndarray:
    """Merge support vertices that share no edge.

    For such a pair P_G is affine along x_i + x_j = const, so moving all the
    mass to the vertex with the larger partial derivative never lowers P_G.
    """
    x = np.array(x, dtype=np.float64)
    A = _share_edge_matrix(G) if A is None else A
    while True:
        S = np.flatnonzero(x > 0)
        pair = next(((i, j) for i, j in itertools.combinations(S, 2) if not A[i, j]), None)
        if pair is None:
            return x
        i, j = pair
        g = polyform.gradient(G, x)
        if g[j] > g[i]:
            i, j = j, i
        x[i] += x[j]
        x[j] = 0.0


def lagrangian(G: Hypergraph, cfg: SolverConfig | None = None) -> SpectralResult:
    """Maximum of P_G over the standard simplex (the p = 1 case)."""
    cfg = SolverConfig(p=1.0) if cfg is None else cfg
    if G.m == 0:
        return _empty_result(G, 1.0, "simplex-ascent")
    rng = np.random.default_rng(cfg.seed)
    fg = _graph_fg(G)
    X0 = _starts(G.n, cfg.restarts, 1.0, rng, G.degrees())
    stop = max(cfg.tol, POLISH_SWITCH) if cfg.polish else cfg.tol
    X, F, _, _, iters = _ascent.gradient_ascent(fg, X0, 1.0, G.r, stop, cfg.max_iter,
                                                cfg.step_rule, cfg.fixed_step)
    A = _share_edge_matrix(G)
    X = np.array([mass_shift(G, x, A) for x in X])
    sub = SolverConfig(p=1.0, tol=cfg.tol, max_iter=max(cfg.max_iter - int(iters.max()), 1),
                       restarts=1, seed=cfg.seed, step_rule=cfg.step_rule,
                       fixed_step=cfg.fixed_step, polish=cfg.polish)
    x, f, res, it2, agree = _run(fg, lambda v: polyform.hessian(G, v), X, 1.0, G.r, sub)
    x = x / x.sum()
    lam = polyform.evaluate(G, x)
    res = kkt_residual(G, x, 1.0)
    return SpectralResult(lam, x, 1.0, res, int(iters.sum()) + it2, res <= cfg.tol, agree,
                          LOWER_BOUND, "simplex-ascent")


def solve(G: Hypergraph, cfg: SolverConfig) -> SpectralResult:
    """Dispatch on p: the simplex solver for p = 1, the sphere solver otherwise."""
    return lagrangian(G, cfg) if cfg.p == 1 else p_spectral_radius(G, cfg)


# -- class-constant reduction ------------------------------------------------

def reduced_form(spec: PartitionSpec, r: int):
    """(form, gradient) in the class weights a, both without the r! factor."""
    if spec.kind is Kind.PARTITE:
        return (lambda A: polyform.multipartite_form(spec.sizes, A, r),
                lambda A: polyform.multipartite_form_grad(spec.sizes, A, r))
    return (lambda A: polyform.chromatic_form(spec.sizes, A, r),
            lambda A: polyform.chromatic_form_grad(spec.sizes, A, r))


def symmetric_solve(spec: PartitionSpec, r: int, p: float, restarts: int = 16,
                    seed: int = 0, tol: float = 1e-12, max_iter: int = 100_000) -> SpectralResult:
    """lambda^(p) of a complete partite or chromatic family through its
    k-variable class-constant problem.

    Maximizes the reduced form subject to sum n_i a_i^p = 1 with a >= 0. The
    variables b_i = n_i^(1/p) a_i put the constraint on the standard sphere
    (or simplex at p = 1). The witness is the expanded n-vector.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    if spec.kind is Kind.PARTITE and spec.k < r:
        raise ValueError(f"complete {spec.k}-partite {r}-graph has no edges")
    sizes = np.array(spec.sizes, dtype=float)
    scale = sizes ** (1.0 / p)
    form, grad = reduced_form(spec, r)
    fact = math.factorial(r)

    def fg(B):
        A = B / scale
        return fact * form(A), fact * grad(A) / scale

    if spec.kind is Kind.CHROMATIC and float(form(np.ones(spec.k))) == 0.0:
        raise ValueError(f"complete chromatic {r}-graph with sizes {spec.sizes} has no edges")
    cfg = SolverConfig(p=p, tol=tol, max_iter=max_iter, restarts=restarts, seed=seed)
    rng = np.random.default_rng(seed)
    # restart 0 is the uniform vertex vector, expressed in b coordinates
    W = _starts(spec.k, restarts, 1.0, rng, sizes)
    W[0] = sizes / sizes.sum()
    B0 = W if p == 1 else W ** (1.0 / p)
    b, f, res, iters, agree = _run(fg, _ascent.fd_hessian(fg), B0, p, r, cfg)
    a = b / scale
    witness = np.repeat(a, spec.sizes)
    # residual of the full problem at the expanded vector: a vertex of class
    # j has partial derivative (dF/da_j) / n_j
    full_grad = fact * grad(a[None, :])[0] / sizes
    full_res = float(_ascent.kkt_residuals(a[None], np.array([f]), full_grad[None], p, r)[0])
    result = SpectralResult(float(f), witness, p, full_res, iters, full_res <= tol, agree,
                            SYMMETRIC, "class-constant")
    result.extra["class_weights"] = [float(v) for v in a]
    return result


# -- brute-force oracle ------------------------------------------------------

MAX_ORACLE_N = 6


def _simplex_grid(n, resolution):
    """All points of the simplex with coordinates in (1/resolution) Z."""
    pts = []
    for bars in itertools.combinations(range(resolution + n - 1), n - 1):
        prev, row = -1, []
        for b in bars:
            row.append(b - prev - 1)
            prev = b
        row.append(resolution + n - 2 - prev)
        pts.append(row)
    return np.array(pts, dtype=float) / resolution


def brute_force_oracle(G: Hypergraph, p: float, resolution: int = 24, polish_top: int = 5):
    """Bracket lambda^(p)(G) on a tiny graph.

    The grid is w / resolution on the simplex mapped to the sphere by
    x = w^(1/p). The best grid points are polished with Nelder-Mead on the
    unconstrained parametrization x = |y| / ||y||_p; the best value found is
    the lower bound. The upper bound adds a Lipschitz estimate of P_G times
    the grid spacing, capped by the bound r! e^(1-1/p) (C(n,r)/n^r)^(1/p).
    """
    if G.n > MAX_ORACLE_N:
        raise ValueError(f"brute_force_oracle is limited to n <= {MAX_ORACLE_N}, got {G.n}")
    if resolution < 10:
        raise ValueError("resolution must be >= 10")
    if p < 1:
        raise ValueError("p must be >= 1")
    if G.m == 0:
        return 0.0, 0.0
    n, r = G.n, G.r
    fact = math.factorial(r)
    W = _simplex_grid(n, resolution)
    X = W ** (1.0 / p)
    vals = fact * np.array([np.prod(X[:, e], axis=1) for e in G.edges]).sum(axis=0)
    order = np.argsort(-vals, kind="stable")[:polish_top]

    E = np.array(G.edges)

    def neg(y):
        y = np.abs(y)
        s = np.sum(y**p) ** (1.0 / p)
        if s == 0:
            return 0.0
        z = y / s
        return -fact * float(np.prod(z[E], axis=1).sum())

    lower = float(vals[order[0]])
    for i in order:
        out = optimize.minimize(neg, X[i] + 1e-9, method="Nelder-Mead",
                                options={"xatol": 1e-13, "fatol": 1e-15, "maxiter": 20000,
                                         "maxfev": 40000})
        lower = max(lower, -float(out.fun))
    deg = np.bincount(E.ravel(), minlength=n)
    lipschitz = fact * float(np.linalg.norm(deg))
    spacing = math.sqrt(n) * resolution ** (-1.0 / p)
    cap = fact * G.m ** (1 - 1 / p) * (math.comb(n, r) / n**r) ** (1 / p)
    upper = min(lower + lipschitz * spacing, cap)
    return lower, max(upper, lower)
