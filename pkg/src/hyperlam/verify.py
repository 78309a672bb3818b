"""Desk-scale verification harnesses: extremality sweeps over class-size
vectors, equality-case checks for the explicit bounds, witness symmetry,
the p -> infinity limit, the chromatic conjecture search and a sampling
check of the cubic function R.

Every harness returns a ``SweepReport``; reports are deterministic given
their parameters and seed.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import _ascent, bounds, polyform, pspectral
from .hypergraph import (Hypergraph, Kind, PartitionSpec, balanced_sizes, complete_chromatic,
                         complete_multipartite, size_vectors)

STRICT_MARGIN = 1e-9
SYMMETRY_TOL = 1e-8
BOUND_TOL = 1e-9
TH4_EQUAL_TOL = 1e-8
TH4_STRICT_TOL = 1e-6
R_TOL = 1e-10
SWEEP_RESTARTS = 16

VERIFIED = "verified"
VIOLATION = "violation"
BUDGET = "budget_exhausted"
EXIT_CODES = {VERIFIED: 0, VIOLATION: 2, BUDGET: 3}


@dataclass
class SweepReport:
    theorem_id: str
    parameter_grid: str
    cases_checked: int = 0
    violations: list = field(default_factory=list)
    seed: int = 0
    cases: list = field(default_factory=list)
    budget_exhausted: bool = False

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def status(self) -> str:
        if self.violations:
            return VIOLATION
        return BUDGET if self.budget_exhausted else VERIFIED

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def flag(self, params, observed, expected, gap, note=""):
        self.violations.append({"parameters": dict(params), "observed": float(observed),
                                "expected": float(expected), "gap": float(gap),
                                "seed": self.seed, "note": note})

    def to_dict(self) -> dict:
        return {"theorem_id": self.theorem_id, "parameter_grid": self.parameter_grid,
                "cases_checked": self.cases_checked, "violations": self.violations,
                "passed": self.passed, "status": self.status, "seed": self.seed,
                "cases": self.cases}


def merge_reports(theorem_id: str, grid: str, reports, seed: int = 0) -> SweepReport:
    """Concatenate per-case reports in the order given."""
    out = SweepReport(theorem_id, grid, seed=seed)
    for rep in reports:
        out.cases_checked += rep.cases_checked
        out.violations.extend(rep.violations)
        out.cases.extend(rep.cases)
        out.budget_exhausted |= rep.budget_exhausted
    return out


def default_jobs() -> int:
    return max(1, int(os.environ.get("HYPERLAM_JOBS", "1")))


def run_cases(func, cases, jobs: int | None = None):
    """Apply ``func(**case)`` to every case; results keep the case order
    whatever the number of workers."""
    jobs = default_jobs() if jobs is None else jobs
    if jobs <= 1 or len(cases) <= 1:
        return [func(**c) for c in cases]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(func, **c) for c in cases]
        return [f.result() for f in futures]


# -- complete families -------------------------------------------------------

def _graph_key(kind: Kind, sizes, r):
    """Sizes up to the isomorphism of the complete graph they generate.

    Chromatic classes smaller than r forbid nothing, so only the classes of
    size >= r (and n) determine the graph.
    """
    if kind is Kind.PARTITE:
        return tuple(sorted(sizes))
    return tuple(sorted(s for s in sizes if s >= r))


@lru_cache(maxsize=4096)
def family_value(kind: Kind, sizes: tuple, r: int, p: float,
                 restarts: int = SWEEP_RESTARTS, seed: int = 0) -> float:
    """lambda^(p) of a complete partite/chromatic graph via its reduction."""
    res = pspectral.symmetric_solve(PartitionSpec(sizes, kind), r, p,
                                    restarts=restarts, seed=seed)
    return res.lam


def _family_graph(kind, sizes, r):
    spec = PartitionSpec(sizes, kind)
    return complete_multipartite(spec, r) if kind is Kind.PARTITE else complete_chromatic(spec, r)


def _extremal_sweep(theorem_id, kind, n, k, r, p, seed, restarts):
    rep = SweepReport(theorem_id, f"n={n},k={k},r={r},p={p}", seed=seed)
    target = tuple(sorted(balanced_sizes(n, k)))
    target_key = _graph_key(kind, target, r)
    values = {}
    for sizes in size_vectors(n, k):
        values[sizes] = family_value(kind, sizes, r, p, restarts, seed)
        rep.cases_checked += 1
    lam_bal = values[target]
    rivals = {s: v for s, v in values.items() if _graph_key(kind, s, r) != target_key}
    margin = None
    if rivals:
        best = max(rivals, key=lambda s: (rivals[s], s))
        margin = lam_bal - rivals[best]
        if margin <= STRICT_MARGIN:
            rep.flag({"n": n, "k": k, "r": r, "p": p, "sizes": list(best)},
                     rivals[best], lam_bal, margin, "balanced sizes are not the strict maximizer")
    rep.cases.append({"n": n, "k": k, "r": r, "p": p, "maximizer": list(target),
                      "lambda": lam_bal, "margin": margin,
                      "values": {",".join(map(str, s)): v for s, v in values.items()}})
    return rep


def verify_partite_extremal(n: int, k: int, r: int, p: float, seed: int = 0,
                            restarts: int = SWEEP_RESTARTS) -> SweepReport:
    """Balanced class sizes strictly maximize lambda^(p) among complete
    k-partite r-graphs of order n."""
    if not (k >= r >= 2 and p > 1 and k <= n <= 14):
        raise ValueError(f"need k >= r >= 2, p > 1 and k <= n <= 14, got n={n}, k={k}, r={r}, p={p}")
    return _extremal_sweep("th1", Kind.PARTITE, n, k, r, p, seed, restarts)


def verify_chromatic_extremal(n: int, k: int, p: float, seed: int = 0,
                              restarts: int = SWEEP_RESTARTS) -> SweepReport:
    """Balanced classes strictly maximize lambda^(p) among complete
    k-chromatic 3-graphs of order n."""
    if not (k >= 2 and p >= 1 and max(k, 3) <= n <= 14):
        raise ValueError(f"need k >= 2, p >= 1 and max(k, 3) <= n <= 14, got n={n}, k={k}, p={p}")
    return _extremal_sweep("th3", Kind.CHROMATIC, n, k, 3, p, seed, restarts)


def verify_th4(n: int, k: int, p: float, seed: int = 0,
               restarts: int = SWEEP_RESTARTS) -> SweepReport:
    """bound_th4 dominates every complete k-chromatic 3-graph of order n and
    is attained exactly in the equality cases."""
    if not (k >= 2 and p >= 1 and max(k, 3) <= n <= 14):
        raise ValueError(f"need k >= 2, p >= 1 and max(k, 3) <= n <= 14, got n={n}, k={k}, p={p}")
    rep = SweepReport("th4", f"n={n},k={k},p={p}", seed=seed)
    bound = bounds.bound_th4(n, k, p)
    for sizes in size_vectors(n, k):
        lam = family_value(Kind.CHROMATIC, sizes, 3, p, restarts, seed)
        slack = bound - lam
        equal = bounds.th4_equality_expected(sizes)
        params = {"n": n, "k": k, "p": p, "sizes": list(sizes)}
        rep.cases_checked += 1
        rep.cases.append({**params, "lambda": lam, "bound": bound, "slack": slack,
                          "equality_expected": equal})
        if equal and abs(slack) > TH4_EQUAL_TOL * max(1.0, bound):
            rep.flag(params, lam, bound, slack, "equality case not attained")
        elif not equal and slack <= TH4_STRICT_TOL:
            rep.flag(params, lam, bound, slack, "strict case not strict")
    return rep


def verify_bound_chain(kind: Kind, n: int, k: int, r: int, p: float, seed: int = 0,
                       restarts: int = SWEEP_RESTARTS) -> SweepReport:
    """lambda <= b1 <= b2 (partite) or lambda <= b3 <= b4 (chromatic) for
    every complete family of order n with k classes."""
    kind = Kind(kind)
    if p <= 1:
        raise ValueError("bound chains are checked for p > 1")
    names = ("b1", "b2") if kind is Kind.PARTITE else ("b3", "b4")
    rep = SweepReport(f"chain-{names[0]}-{names[1]}", f"{kind.value},n={n},k={k},r={r},p={p}",
                      seed=seed)
    for sizes in size_vectors(n, k):
        spec = PartitionSpec(sizes, kind)
        e = bounds.edge_count(spec, r)
        if e == 0:
            continue
        lam = family_value(kind, sizes, r, p, restarts, seed)
        if kind is Kind.PARTITE:
            lo, hi = bounds.bound_b1(k, r, p, e), bounds.bound_b2(k, r, p, n)
        else:
            lo, hi = bounds.bound_b3(k, r, p, e), bounds.bound_b4(k, r, p, n)
        params = {"kind": kind.value, "n": n, "k": k, "r": r, "p": p, "sizes": list(sizes)}
        rep.cases_checked += 1
        rep.cases.append({**params, "lambda": lam, names[0]: lo, names[1]: hi})
        if lam > lo + BOUND_TOL:
            rep.flag(params, lam, lo, lo - lam, f"lambda exceeds {names[0]}")
        if lo > hi + BOUND_TOL:
            rep.flag(params, lo, hi, hi - lo, f"{names[0]} exceeds {names[1]}")
    return rep


# -- Lagrangian of partite graphs ----------------------------------------------

def maclaurin_holds(y, r: int, tol: float = 1e-12) -> bool:
    """e_r(y) / C(k, r) <= (mean y)^r."""
    y = np.asarray(y, dtype=float)
    lhs = float(polyform.elementary_symmetric(y, r)) / math.comb(len(y), r)
    rhs = float(np.mean(y)) ** r
    return lhs <= rhs * (1 + tol)


def verify_mst(spec: PartitionSpec, r: int, samples: int = 20, seed: int = 0) -> SweepReport:
    """Lagrangian of a complete k-partite r-graph.

    Random vectors with class sums 1/k attain r! C(k,r) k^-r to 1e-12; the
    simplex solver finds that value with class sums 1/k to 1e-6; random
    positive vectors satisfy the Maclaurin inequality.
    """
    k = spec.k
    if spec.kind is not Kind.PARTITE or k < r:
        raise ValueError("verify_mst needs a partite spec with k >= r")
    rep = SweepReport("mst", f"sizes={list(spec.sizes)},r={r}", seed=seed)
    rng = np.random.default_rng(seed)
    G = complete_multipartite(spec, r)
    target = bounds.bound_l1(k, r)
    classes = spec.classes()
    for t in range(samples):
        x = np.zeros(spec.n)
        for cls in classes:
            x[list(cls)] = rng.dirichlet(np.ones(len(cls))) / k
        val = polyform.evaluate(G, x)
        rep.cases_checked += 1
        if abs(val - target) > 1e-12 * max(1.0, target):
            rep.flag({"sizes": list(spec.sizes), "r": r, "sample": t}, val, target,
                     val - target, "class sums 1/k do not attain the bound")
    res = pspectral.lagrangian(G, pspectral.SolverConfig(p=1.0, seed=seed))
    sums = [float(res.witness[list(c)].sum()) for c in classes]
    rep.cases_checked += 1
    params = {"sizes": list(spec.sizes), "r": r}
    if abs(res.lam - target) > 1e-8 * max(1.0, target):
        rep.flag(params, res.lam, target, res.lam - target, "solver misses the Lagrangian")
    worst = max(abs(s - 1 / k) for s in sums)
    if worst > 1e-6:
        rep.flag(params, worst, 0.0, worst, "maximizer class sums differ from 1/k")
    for t in range(samples):
        y = rng.random(k) + 1e-3
        rep.cases_checked += 1
        if not maclaurin_holds(y, r):
            rep.flag({"k": k, "r": r, "sample": t}, 0.0, 0.0, 0.0, "Maclaurin inequality fails")
    rep.cases.append({**params, "lambda": res.lam, "bound": target, "class_sums": sums})
    return rep


# -- graph-level properties ----------------------------------------------------

def transposition_automorphisms(G: Hypergraph):
    return [(u, v) for u in range(G.n) for v in range(u + 1, G.n)
            if G.transposition_is_automorphism(u, v)]


def verify_eigvec_symmetry(G: Hypergraph, p: float, automorphism_pairs=None,
                           cfg: pspectral.SolverConfig | None = None) -> SweepReport:
    """The solver witness has x_u = x_v for every transposition automorphism
    (u, v), to 1e-8."""
    cfg = pspectral.SolverConfig(p=p) if cfg is None else cfg
    pairs = transposition_automorphisms(G) if automorphism_pairs is None else automorphism_pairs
    rep = SweepReport("symmetry", f"{G!r},p={p}", seed=cfg.seed)
    res = pspectral.solve(G, cfg)
    x = res.witness
    worst = 0.0
    for u, v in pairs:
        gap = abs(x[u] - x[v])
        worst = max(worst, gap)
        rep.cases_checked += 1
        if gap > SYMMETRY_TOL:
            rep.flag({"graph": repr(G), "p": p, "pair": [u, v]}, x[u], x[v], gap,
                     "witness differs on an automorphic pair")
    rep.cases.append({"graph": repr(G), "p": p, "lambda": res.lam, "pairs": len(pairs),
                      "max_gap": worst})
    return rep


LIMIT_PS = (4, 8, 16, 32, 64)


def verify_limit(G: Hypergraph, p_list=LIMIT_PS, cfg: pspectral.SolverConfig | None = None,
                 rtol: float = 0.05) -> SweepReport:
    """lambda^(p) n^(r/p) decreases toward r! e(G) as p grows.

    At the uniform vector it equals r! e(G), so the scaled value is always
    at least r! e(G); the check asserts it is nonincreasing along p_list
    (to 1e-9 relative) and within ``rtol`` of r! e(G) at the last p.
    """
    base = pspectral.SolverConfig() if cfg is None else cfg
    target = math.factorial(G.r) * G.m
    rep = SweepReport("limits", f"{G!r},p={list(p_list)}", seed=base.seed)
    scaled = []
    for p in p_list:
        c = pspectral.SolverConfig(p=p, tol=base.tol, max_iter=base.max_iter,
                                   restarts=base.restarts, seed=base.seed)
        scaled.append(pspectral.solve(G, c).lam * G.n ** (G.r / p))
        rep.cases_checked += 1
    for (p0, s0), (p1, s1) in zip(zip(p_list, scaled), zip(p_list[1:], scaled[1:])):
        if s1 > s0 * (1 + 1e-9):
            rep.flag({"graph": repr(G), "p": [p0, p1]}, s1, s0, s0 - s1,
                     "scaled value increased with p")
    if G.m and abs(scaled[-1] - target) > rtol * target:
        rep.flag({"graph": repr(G), "p": p_list[-1]}, scaled[-1], target,
                 scaled[-1] - target, "last point not within tolerance of r! e(G)")
    rep.cases.append({"graph": repr(G), "target": target, "scaled": scaled,
                      "p": list(p_list)})
    return rep


# -- conjecture search ---------------------------------------------------------

def _validate_reduction(spec: PartitionSpec, r: int, rng, trials: int = 3) -> float:
    """Largest relative gap between the reduced chromatic form and the full
    form on expanded class-constant vectors."""
    G = complete_chromatic(spec, r)
    worst = 0.0
    for _ in range(trials):
        a = rng.random(spec.k)
        full = polyform.evaluate(G, np.repeat(a, spec.sizes))
        red = polyform.reduced_evaluate_chromatic(polyform.ClassWeights(spec, a), r)
        worst = max(worst, abs(full - red) / max(abs(full), 1e-300))
    return worst


def conjecture_search(n: int, k: int, r: int, p_list, budget: int | None = None,
                      seed: int = 0, restarts: int = SWEEP_RESTARTS,
                      corroborate_n: int = 8) -> SweepReport:
    """Balanced extremality and the explicit bound for complete k-chromatic
    r-graphs, r >= 4, above the complete-graph range n > (r-1) k.

    ``budget`` caps the number of reduced solves. Values are computed on the
    class-constant reduction; for n <= ``corroborate_n`` the reduction is
    checked against the full form and the full-graph solver.
    """
    if r < 4:
        raise ValueError("conjecture_search covers r >= 4; r = 3 is handled by the th3/th4 sweeps")
    if k < 2:
        raise ValueError("need k >= 2")
    if n <= (r - 1) * k:
        raise ValueError(f"n={n} <= (r-1)k={(r - 1) * k}: every k-chromatic {r}-graph of this "
                         "order is dominated by the complete graph, whose value is "
                         "r! C(n,r) n^(-r/p)")
    if n > 12:
        raise ValueError("conjecture_search is limited to n <= 12")
    rep = SweepReport("conjectures", f"n={n},k={k},r={r},p={list(p_list)}", seed=seed)
    rng = np.random.default_rng(seed)
    target = tuple(sorted(balanced_sizes(n, k)))
    target_key = _graph_key(Kind.CHROMATIC, target, r)
    compositions = list(size_vectors(n, k))
    used = 0
    if n <= corroborate_n:
        for sizes in compositions:
            gap = _validate_reduction(PartitionSpec(sizes, Kind.CHROMATIC), r, rng)
            if gap > 1e-12:
                rep.flag({"sizes": list(sizes), "r": r}, gap, 0.0, gap,
                         "reduced form disagrees with the full form")
    for p in p_list:
        values = {}
        for sizes in compositions:
            if budget is not None and used >= budget:
                rep.budget_exhausted = True
                break
            values[sizes] = family_value(Kind.CHROMATIC, sizes, r, float(p), restarts, seed)
            used += 1
            rep.cases_checked += 1
        if rep.budget_exhausted:
            break
        bound = bounds.bound_co2(n, k, r, p)
        lam_bal = values[target]
        rivals = {s: v for s, v in values.items()
                  if _graph_key(Kind.CHROMATIC, s, r) != target_key}
        margin = None
        params = {"n": n, "k": k, "r": r, "p": p}
        if rivals:
            best = max(rivals, key=lambda s: (rivals[s], s))
            margin = lam_bal - rivals[best]
            if margin <= STRICT_MARGIN:
                rep.flag({**params, "sizes": list(best)}, rivals[best], lam_bal, margin,
                         "co1: balanced classes are not the strict maximizer")
        bound_equal = n % k == 0
        for sizes, lam in values.items():
            slack = bound - lam
            tight = bound_equal and sizes == target
            if (tight and abs(slack) > TH4_EQUAL_TOL * max(1.0, bound)) or \
                    (not tight and slack <= 0):
                rep.flag({**params, "sizes": list(sizes)}, lam, bound, slack,
                         "co2: value not strictly below the bound" if not tight
                         else "co2: balanced value differs from the bound")
        corroboration = None
        if n <= corroborate_n:
            G = complete_chromatic(PartitionSpec(target, Kind.CHROMATIC), r)
            full = pspectral.solve(G, pspectral.SolverConfig(p=float(p), seed=seed))
            corroboration = full.lam
            if full.lam > lam_bal + 1e-8 * max(1.0, lam_bal):
                rep.flag({**params, "sizes": list(target)}, full.lam, lam_bal,
                         lam_bal - full.lam, "full solver exceeds the reduced value")
        rep.cases.append({**params, "maximizer": list(target), "lambda": lam_bal,
                          "margin": margin, "bound_co2": bound, "full_solver": corroboration,
                          "values": {",".join(map(str, s)): v for s, v in values.items()}})
    return rep


# -- the cubic R ---------------------------------------------------------------

def _R_grads(N, Y):
    """Partial derivatives of R in the class sizes N and in Y = N * a."""
    S = Y.sum(axis=1, keepdims=True)
    c = 0.5 * (1.0 - 1.0 / N)
    dN = 0.5 * Y**2 * (S - Y) / N**2
    cy2 = c * Y**2
    p1, p2 = S, (Y**2).sum(axis=1, keepdims=True)
    e2_rest = 0.5 * ((p1 - Y) ** 2 - (p2 - Y**2))
    dY = 2 * c * Y * (S - Y) + (cy2.sum(axis=1, keepdims=True) - cy2) + e2_rest
    return dN, dY


def _project_sizes(N, n, k):
    """Onto {N_i >= 1, sum N_i = n}."""
    if n == k:
        return np.ones_like(N)
    return 1.0 + (n - k) * _ascent.project_simplex((N - 1.0) / (n - k))


def _R_ascent(N, Y, n, k, s, steps):
    """Monotone projected ascent on both blocks of variables."""
    f = bounds.R_batch(N, Y / N)
    t = np.full(N.shape[0], 0.5)
    for _ in range(steps):
        dN, dY = _R_grads(N, Y)
        Nc = _project_sizes(N + t[:, None] * dN, n, k)
        Yc = s * _ascent.project_simplex((Y + t[:, None] * dY) / s) if s > 0 else Y
        fc = bounds.R_batch(Nc, Yc / Nc)
        up = fc > f
        N[up], Y[up], f[up] = Nc[up], Yc[up], fc[up]
        t = np.where(up, np.minimum(2 * t, 4.0), t * 0.5)
    return N, Y, f


def verify_R_max(n: int, k: int, samples: int = 10_000, seed: int = 0, s: float = 1.0,
                 ascent_steps: int = 200, chunk: int = 20_000) -> SweepReport:
    """Sample (n_vec, a_vec) with n_i >= 1, sum n_i = n, sum n_i a_i = s and
    climb from each sample: no value may exceed R_bound + 1e-10, and the
    constant point must attain R_bound to 1e-12."""
    if not (k >= 2 and n >= k):
        raise ValueError(f"need n >= k >= 2, got n={n}, k={k}")
    rep = SweepReport("th41", f"n={n},k={k},samples={samples},s={s}", seed=seed)
    rng = np.random.default_rng(seed)
    bound = bounds.R_bound(n, k, s)
    uniform = bounds.R_function(np.full(k, n / k), np.full(k, s / n))
    rep.cases_checked += 1
    if abs(uniform - bound) > 1e-12 * max(1.0, abs(bound)):
        rep.flag({"n": n, "k": k, "s": s, "point": "uniform"}, uniform, bound,
                 bound - uniform, "constant point does not attain the bound")
    best, best_at = -np.inf, None
    done = 0
    while done < samples:
        m = min(chunk, samples - done)
        N = 1.0 + (n - k) * rng.dirichlet(np.ones(k), size=m)
        Y = s * rng.dirichlet(np.ones(k), size=m)
        f0 = bounds.R_batch(N, Y / N)
        N, Y, f = _R_ascent(N, Y, n, k, s, ascent_steps) if s > 0 else (N, Y, f0)
        top = np.maximum(f0, f)
        i = int(np.argmax(top))
        if top[i] > best:
            best, best_at = float(top[i]), (N[i].tolist(), (Y[i] / N[i]).tolist())
        bad = np.flatnonzero(top > bound + R_TOL)
        for j in bad[:10]:
            rep.flag({"n": n, "k": k, "s": s, "sample": done + int(j),
                      "n_vec": N[j].tolist(), "a_vec": (Y[j] / N[j]).tolist()},
                     top[j], bound, bound - top[j], "R exceeds R_bound")
        rep.cases_checked += m
        done += m
    rep.cases.append({"n": n, "k": k, "s": s, "bound": bound, "uniform": uniform,
                      "max_found": best, "argmax": best_at})
    return rep
