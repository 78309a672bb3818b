"""Command-line front end: ``hyperlam {compute,bounds,construct,verify,search,table}``.

Exit codes: 0 success, 1 bad input, 2 violation found, 3 budget exhausted,
4 non-convergence or uncertified result under --strict.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys

from . import bounds, formats, kernels, pspectral, verify
from .hypergraph import (Hypergraph, Kind, PartitionSpec, balanced_sizes, complete_chromatic,
                         complete_graph, complete_multipartite, size_vectors)

EXIT_BAD_INPUT = 1
EXIT_NOT_CERTIFIED = 4
DIGITS = 12
ORACLE_MAX_N = 5
FAMILIES = ("complete", "turan", "chromatic", "multipartite")
THEOREMS = ("th1", "th3", "mst", "th4", "th41", "limits", "symmetry")


class UsageError(ValueError):
    pass


def fmt(v) -> str:
    if isinstance(v, bool) or v is None:
        return str(v).lower() if isinstance(v, bool) else ""
    if isinstance(v, float):
        return f"{v:.{DIGITS}g}"
    if isinstance(v, (list, tuple)):
        return " ".join(fmt(x) for x in v)
    return str(v)


def rounded(obj):
    """Floats rounded to 12 significant digits, recursively."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, float):
        return float(f"{obj:.{DIGITS}g}")
    if isinstance(obj, dict):
        return {k: rounded(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [rounded(v) for v in obj]
    return obj


def dump_json(obj) -> str:
    return json.dumps(rounded(obj), indent=2, sort_keys=False)


def dump_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(row.get(h)) for h in header])
    return buf.getvalue()


def dump_text(d: dict) -> str:
    return "".join(f"{k}: {fmt(v)}\n" for k, v in d.items())


# -- grids and families ------------------------------------------------------

def _number(tok: str):
    tok = tok.strip()
    try:
        return int(tok)
    except ValueError:
        pass
    if tok.isidentifier():
        return tok
    return float(tok)


def parse_grid(spec: str) -> dict:
    """``"k=2..3,n=4..10,p=1,2"`` -> {"k": [2, 3], "n": [4..10], "p": [1, 2]}.

    ``a..b`` is an inclusive integer range; a bare value after a comma
    extends the previous key.
    """
    grid, key = {}, None
    for tok in filter(None, (t.strip() for t in (spec or "").split(","))):
        if "=" in tok:
            key, tok = (s.strip() for s in tok.split("=", 1))
            if not key:
                raise UsageError(f"empty key in grid {spec!r}")
            grid.setdefault(key, [])
        elif key is None:
            raise UsageError(f"grid value {tok!r} has no key")
        try:
            if ".." in tok:
                lo, hi = tok.split("..")
                grid[key].extend(range(int(lo), int(hi) + 1))
            else:
                grid[key].append(_number(tok))
        except ValueError:
            raise UsageError(f"bad grid value {tok!r}") from None
    return grid


def grid_points(grid: dict, keys, defaults=None):
    """Cartesian product over ``keys`` (in that order); missing keys take
    their default or raise."""
    defaults = defaults or {}
    if not grid:
        return []
    axes = []
    for k in keys:
        if k in grid:
            axes.append(grid[k])
        elif k in defaults:
            axes.append([defaults[k]])
        else:
            raise UsageError(f"grid needs a value for {k!r}")
    unknown = set(grid) - set(keys)
    if unknown:
        raise UsageError(f"unknown grid keys {sorted(unknown)}")
    return [dict(zip(keys, vals)) for vals in itertools.product(*axes)]


def parse_sizes(text):
    if text is None:
        return None
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError:
        raise UsageError(f"bad --sizes {text!r}") from None


def family_graph(name, n=None, k=None, r=None, sizes=None):
    """(graph, partition spec or None) for a named family."""
    if r is None:
        raise UsageError("--r is required for families")
    if name == "complete":
        if n is None:
            raise UsageError("complete family needs --n")
        # the complete graph is the chromatic graph with singleton classes
        return complete_graph(n, r), PartitionSpec((1,) * n, Kind.CHROMATIC)
    kind = Kind.PARTITE if name in ("turan", "multipartite") else Kind.CHROMATIC
    if sizes is None:
        if n is None or k is None:
            raise UsageError(f"{name} family needs --n and --k, or --sizes")
        if name == "turan" and k < r:
            raise UsageError(f"turan family needs k >= r, got k={k}, r={r}")
        if k < 1 or n < k:
            raise UsageError(f"need n >= k >= 1, got n={n}, k={k}")
        sizes = balanced_sizes(n, k)
    elif n is not None and sum(sizes) != n:
        raise UsageError(f"--sizes sum to {sum(sizes)}, not --n {n}")
    spec = PartitionSpec(sizes, kind)
    G = complete_multipartite(spec, r) if kind is Kind.PARTITE else complete_chromatic(spec, r)
    return G, spec


def _graph_from_args(args):
    if (args.graph is None) == (args.family is None):
        raise UsageError("give exactly one of --graph or --family")
    if args.graph is not None:
        if args.sizes or args.n is not None or args.k is not None:
            raise UsageError("--graph conflicts with --n/--k/--sizes")
        try:
            return formats.load(args.graph), None
        except OSError as exc:
            raise UsageError(f"cannot read {args.graph}: {exc.strerror}") from None
    return family_graph(args.family, args.n, args.k, args.r, parse_sizes(args.sizes))


# -- commands ------------------------------------------------------------------

def certified_result(G: Hypergraph, spec, cfg: pspectral.SolverConfig):
    """Solver result with its certification upgraded when the class-constant
    solve or the grid oracle corroborates it."""
    res = pspectral.solve(G, cfg)
    if G.m == 0:
        return res
    tol = 1e-8 * max(1.0, abs(res.lam))
    if spec is not None:
        sym = pspectral.symmetric_solve(spec, G.r, cfg.p, seed=cfg.seed)
        res.extra["symmetric_lambda"] = sym.lam
        if abs(sym.lam - res.lam) <= tol:
            res.certification = pspectral.SYMMETRIC
    if res.certification == pspectral.LOWER_BOUND and G.n <= ORACLE_MAX_N:
        lo, hi = pspectral.brute_force_oracle(G, cfg.p)
        res.extra["oracle_bracket"] = [lo, hi]
        if lo - tol <= res.lam <= hi + tol:
            res.certification = pspectral.ORACLE
    return res


def cmd_compute(args, out):
    G, spec = _graph_from_args(args)
    cfg = pspectral.SolverConfig(p=args.p, restarts=args.restarts, seed=args.seed, tol=args.tol,
                                 max_iter=args.max_iter)
    res = certified_result(G, spec, cfg)
    d = res.to_dict()
    d.update({"r": G.r, "n": G.n, "m": G.m})
    meta = {"seed": args.seed, "restarts": args.restarts, "tol": args.tol,
            "max_iter": args.max_iter, "backend": kernels.BACKEND}
    if args.format == "json":
        out.write(dump_json({**d, "metadata": meta}) + "\n")
    elif args.format == "csv":
        header = ["lambda", "p", "kkt_residual", "converged", "certification", "iterations",
                  "restarts_agreeing", "n", "r", "m", "witness"]
        out.write(dump_csv(header, [d]))
    else:
        out.write(dump_text({**d, **meta}))
    if args.strict and (not res.converged or res.certification == pspectral.LOWER_BOUND):
        return EXIT_NOT_CERTIFIED
    return 0


def _bound_rows(G, spec, p, lam):
    if spec is None:
        return []
    r = G.r
    if spec.kind is Kind.PARTITE:
        return bounds.partite_reports(spec, r, p, lam) if p > 1 and spec.k >= r else []
    if spec.k < 2:
        return []
    return bounds.chromatic_reports(spec, r, p, lam)


def cmd_bounds(args, out):
    if args.graph is None and args.family is None:
        if None in (args.n, args.k, args.r):
            raise UsageError("bounds needs --graph, --family, or all of --n --k --r")
        rows = formula_bounds(args.n, args.k, args.r, args.p)
    else:
        G, spec = _graph_from_args(args)
        if spec is None:
            raise UsageError("bounds on a graph file need its class structure; use --family")
        cfg = pspectral.SolverConfig(p=args.p, restarts=args.restarts, seed=args.seed)
        lam = certified_result(G, spec, cfg).lam
        rows = [b.to_dict() for b in _bound_rows(G, spec, args.p, lam)]
    header = ["bound_name", "value", "achieved_lambda", "slack", "equality_case"]
    if args.format == "json":
        out.write(dump_json(rows) + "\n")
    elif args.format == "csv":
        out.write(dump_csv(header, rows))
    else:
        out.write("".join(dump_text(r) + "\n" for r in rows))
    return 0


def formula_bounds(n, k, r, p):
    """Every bound whose preconditions hold at (n, k, r, p), without an
    achieved value."""
    rows = []
    B = bounds.BoundReport
    if k >= r >= 2:
        rows.append(B("l1", bounds.bound_l1(k, r)))
        if p > 1:
            e_max = bounds.multipartite_edge_count(PartitionSpec(balanced_sizes(n, k)), r)
            rows.append(B("b1", bounds.bound_b1(k, r, p, e_max)))
            rows.append(B("b2", bounds.bound_b2(k, r, p, n)))
    if k >= 2 and n >= k:
        e_max = bounds.chromatic_edge_count(PartitionSpec(balanced_sizes(n, k), Kind.CHROMATIC), r)
        rows.append(B("b3", bounds.bound_b3(k, r, p, e_max)))
        rows.append(B("b4", bounds.bound_b4(k, r, p, n)))
        if r == 3:
            rows.append(B("th4", bounds.bound_th4(n, k, p)))
        elif n > (r - 1) * k:
            rows.append(B("co2", bounds.bound_co2(n, k, r, p)))
        if n <= (r - 1) * k:
            rows.append(B("pth4", bounds.bound_pth4(n, r, p)))
    return [b.to_dict() for b in rows]


def cmd_construct(args, out):
    G, _ = _graph_from_args(args)
    fmt_ = "json" if args.format == "json" else "text"
    text = formats.serialize(G, fmt_)
    out.write(text if text.endswith("\n") else text + "\n")
    if G.warning:
        print(f"warning: {G.warning}", file=sys.stderr)
    return 0


def _theorem_cases(theorem, grid, seed):
    """(function, list of keyword cases) for a theorem id and parsed grid."""
    if theorem == "th1":
        pts = grid_points(grid, ["n", "k", "r", "p"])
        return verify.verify_partite_extremal, [
            {"n": c["n"], "k": c["k"], "r": c["r"], "p": float(c["p"]), "seed": seed}
            for c in pts if c["k"] >= c["r"] >= 2 and c["n"] >= c["k"] and c["p"] > 1]
    if theorem in ("th3", "th4"):
        pts = grid_points(grid, ["n", "k", "p"])
        func = verify.verify_chromatic_extremal if theorem == "th3" else verify.verify_th4
        return func, [{"n": c["n"], "k": c["k"], "p": float(c["p"]), "seed": seed}
                      for c in pts if c["k"] >= 2 and c["n"] >= max(c["k"], 3)]
    if theorem == "mst":
        pts = grid_points(grid, ["n", "k", "r", "samples"], {"samples": 20})
        cases = []
        for c in pts:
            if c["k"] >= c["r"] >= 2 and c["n"] >= c["k"]:
                for sizes in size_vectors(c["n"], c["k"]):
                    cases.append({"sizes": sizes, "r": c["r"], "samples": c["samples"],
                                  "seed": seed})
        return _mst_case, cases
    if theorem == "th41":
        pts = grid_points(grid, ["n", "k", "samples", "s"], {"samples": 10_000, "s": 1.0})
        return verify.verify_R_max, [
            {"n": c["n"], "k": c["k"], "samples": int(c["samples"]), "s": float(c["s"]),
             "seed": seed} for c in pts if c["n"] >= c["k"] >= 2]
    if theorem in ("limits", "symmetry"):
        defaults = {"family": "complete", "k": 2, "p": 2.0}
        keys = ["family", "n", "k", "r"] + (["p"] if theorem == "symmetry" else [])
        grid = dict(grid)
        if "family" in grid:
            grid["family"] = [FAMILIES[int(f)] if isinstance(f, int) else f for f in grid["family"]]
        pts = grid_points(grid, keys, defaults)
        func = _limit_case if theorem == "limits" else _symmetry_case
        return func, [{**c, "seed": seed} for c in pts]
    raise UsageError(f"unknown theorem {theorem!r}")


def _mst_case(sizes, r, samples, seed):
    return verify.verify_mst(PartitionSpec(sizes), r, samples=samples, seed=seed)


def _limit_case(family, n, k, r, seed):
    G, _ = family_graph(family, n, k, r)
    return verify.verify_limit(G, cfg=pspectral.SolverConfig(seed=seed))


def _symmetry_case(family, n, k, r, p, seed):
    G, _ = family_graph(family, n, k, r)
    return verify.verify_eigvec_symmetry(G, float(p), cfg=pspectral.SolverConfig(p=float(p),
                                                                                 seed=seed))


def write_report(rep: verify.SweepReport, fmt_, out):
    if fmt_ == "json":
        out.write(dump_json(rep.to_dict()) + "\n")
    elif fmt_ == "csv":
        header = ["theorem_id", "parameter_grid", "cases_checked", "violations", "passed",
                  "status"]
        row = {**rep.to_dict(), "violations": len(rep.violations)}
        out.write(dump_csv(header, [row]))
    else:
        status = "verified on grid" if rep.status == verify.VERIFIED else rep.status
        out.write(dump_text({"theorem_id": rep.theorem_id, "parameter_grid": rep.parameter_grid,
                             "cases_checked": rep.cases_checked,
                             "violations": len(rep.violations), "status": status}))
        for v in rep.violations:
            out.write(f"violation: {json.dumps(rounded(v))}\n")


def cmd_verify(args, out):
    grid = parse_grid(args.grid)
    func, cases = _theorem_cases(args.theorem, grid, args.seed)
    reports = verify.run_cases(func, cases, args.jobs)
    rep = verify.merge_reports(args.theorem, args.grid, reports, seed=args.seed)
    write_report(rep, args.format, out)
    return rep.exit_code


def cmd_search(args, out):
    p_list = [float(_number(t)) for t in args.p.split(",") if t.strip()]
    if args.budget is not None and args.budget < 0:
        raise UsageError("--budget must be nonnegative")
    rep = verify.conjecture_search(args.n, args.k, args.r, p_list, budget=args.budget,
                                   seed=args.seed)
    # keep the findings that bear on the chosen conjecture
    other = "co2" if args.conjecture == "co1" else "co1"
    rep.violations = [v for v in rep.violations if not v["note"].startswith(other)]
    rep.theorem_id = args.conjecture
    write_report(rep, args.format, out)
    return rep.exit_code


TABLE_HEADER = ["family", "n", "k", "r", "p", "sizes", "lambda", "bound_name", "value",
                "slack", "equality_case"]


def cmd_table(args, out):
    if not args.bounds:
        raise UsageError("table currently supports --bounds only")
    if args.family in (None, "complete"):
        raise UsageError("table needs --family turan, chromatic or multipartite")
    grid = parse_grid(args.grid)
    rows = []
    for c in grid_points(grid, ["n", "k", "r", "p"]) if grid else []:
        try:
            G, spec = family_graph(args.family, c["n"], c["k"], c["r"])
        except ValueError:
            continue
        p = float(c["p"])
        if G.m == 0:
            continue
        lam = pspectral.symmetric_solve(spec, G.r, p, seed=args.seed).lam
        for b in _bound_rows(G, spec, p, lam):
            rows.append({"family": args.family, "n": G.n, "k": spec.k, "r": G.r, "p": p,
                         "sizes": list(spec.sizes), "lambda": lam, **b.to_dict()})
    if args.format == "json":
        out.write(dump_json(rows) + "\n")
    else:
        out.write(dump_csv(TABLE_HEADER, rows))
    return 0


# -- parser ------------------------------------------------------------------

def _add_graph_source(p):
    p.add_argument("--graph", help="hypergraph file (text or JSON)")
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--sizes", help="class sizes a,b,c; overrides the balanced sizes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hyperlam",
                                     description="p-spectral radius of uniform hypergraphs")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="lambda^(p) of a graph or family")
    _add_graph_source(p)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iter", type=int, default=100_000)
    p.add_argument("--format", choices=("json", "csv", "text"), default="text")
    p.add_argument("--strict", action="store_true",
                   help="exit 4 unless converged and certified")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("bounds", help="explicit bounds, optionally against the achieved value")
    _add_graph_source(p)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("json", "csv", "text"), default="csv")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("construct", help="write a family as a graph file")
    _add_graph_source(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="run a verification sweep")
    p.add_argument("--theorem", choices=THEOREMS, required=True)
    p.add_argument("--grid", required=True, help='e.g. "k=2..3,n=4..10,p=1,2"')
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=None, help="worker processes (HYPERLAM_JOBS)")
    p.add_argument("--format", choices=("json", "csv", "text"), default="text")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", help="search complete chromatic r-graphs for conjecture violations")
    p.add_argument("--conjecture", choices=("co1", "co2"), required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", default="1,2", help="comma-separated list")
    p.add_argument("--budget", type=int, default=None, help="maximum number of reduced solves")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("json", "csv", "text"), default="text")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("table", help="achieved lambda against the explicit bounds")
    p.add_argument("--bounds", action="store_true")
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--grid", default="")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_table)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_BAD_INPUT if exc.code else 0
    try:
        return args.func(args, out)
    except (UsageError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
