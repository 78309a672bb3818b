"""Text and JSON serialization of hypergraphs.

Text format: a header line ``r n m`` followed by m lines of r
space-separated 0-based vertex indices. Lines starting with ``#`` and blank
lines are ignored. The JSON mirror is ``{"r": .., "n": .., "edges": [[..], ..]}``.
"""

import json

from .hypergraph import Hypergraph


class GraphFormatError(ValueError):
    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


def _ints(tokens, lineno):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise GraphFormatError(f"expected integers, got {' '.join(tokens)!r}", lineno) from None


def parse_text(text: str) -> Hypergraph:
    lines = [(i, ln.split()) for i, ln in enumerate(text.splitlines(), start=1)
             if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise GraphFormatError("missing header line 'r n m'")
    lineno, header = lines[0]
    if len(header) != 3:
        raise GraphFormatError("header must be 'r n m'", lineno)
    r, n, m = _ints(header, lineno)
    if r < 2 or n < r or m < 0:
        raise GraphFormatError(f"invalid header r={r} n={n} m={m}", lineno)
    body = lines[1:]
    if len(body) != m:
        where = body[m][0] if len(body) > m else (body[-1][0] if body else lineno)
        raise GraphFormatError(f"header declares {m} edges, found {len(body)}", where)
    seen = {}
    edges = []
    for lineno, tokens in body:
        verts = _ints(tokens, lineno)
        if len(verts) != r:
            raise GraphFormatError(f"edge has {len(verts)} vertices, expected {r}", lineno)
        if len(set(verts)) != r:
            raise GraphFormatError(f"repeated vertex in edge {verts}", lineno)
        if min(verts) < 0 or max(verts) >= n:
            raise GraphFormatError(f"vertex out of range [0, {n}) in edge {verts}", lineno)
        key = tuple(sorted(verts))
        if key in seen:
            raise GraphFormatError(f"duplicate edge {list(key)} (first on line {seen[key]})", lineno)
        seen[key] = lineno
        edges.append(key)
    return Hypergraph(r, n, edges)


def to_text(G: Hypergraph) -> str:
    out = [f"{G.r} {G.n} {G.m}"]
    out.extend(" ".join(map(str, e)) for e in G.edges)
    return "\n".join(out) + "\n"


def parse_json(text: str) -> Hypergraph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    try:
        r, n, edges = data["r"], data["n"], data["edges"]
    except (KeyError, TypeError):
        raise GraphFormatError("JSON graph needs fields r, n, edges") from None
    try:
        return Hypergraph(r, n, [tuple(e) for e in edges])
    except (ValueError, TypeError) as exc:
        raise GraphFormatError(str(exc)) from None


def to_json(G: Hypergraph) -> str:
    return json.dumps({"r": G.r, "n": G.n, "edges": [list(e) for e in G.edges]})


def parse(text: str, fmt: str | None = None) -> Hypergraph:
    """Parse either format; ``fmt=None`` sniffs JSON by its leading brace."""
    if fmt is None:
        fmt = "json" if text.lstrip().startswith("{") else "text"
    if fmt == "json":
        return parse_json(text)
    if fmt == "text":
        return parse_text(text)
    raise ValueError(f"unknown format {fmt!r}")


def serialize(G: Hypergraph, fmt: str = "text") -> str:
    if fmt == "json":
        return to_json(G)
    if fmt == "text":
        return to_text(G)
    raise ValueError(f"unknown format {fmt!r}")


def load(path, fmt=None) -> Hypergraph:
    with open(path) as fh:
        return parse(fh.read(), fmt)
