"""Text formats for graphs, colored digraphs, fractional colorings and step kernels.

Graph file: first line ``n m`` then m lines ``u v`` with 1-based node ids.
Colored digraph: ``n k`` then an n x n color matrix (diagonal 0).
Fractional coloring: ``n k`` then k blocks of n x n floats.
Step kernel: ``m bound`` then an m x m grid; k-digraphon: ``k m`` then k blocks.
Lines starting with ``#`` are comments everywhere. Floats are written with
17 significant digits so that a save/load round trip is exact.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .graphs import FractionalColoring, KColoredDigraph, SimpleGraph


class FormatError(ValueError):
    """Malformed input file; ``line`` is 1-based."""

    def __init__(self, msg, line=None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _data_lines(text: str):
    """(lineno, tokens) for every non-blank, non-comment line."""
    for no, raw in enumerate(text.splitlines(), start=1):
        s = raw.strip()
        if s and not s.startswith("#"):
            yield no, s.split()


def _ints(tokens, no, count=None):
    try:
        vals = [int(t) for t in tokens]
    except ValueError:
        raise FormatError(f"expected integers, got {' '.join(tokens)!r}", no) from None
    if count is not None and len(vals) != count:
        raise FormatError(f"expected {count} integers, got {len(vals)}", no)
    return vals


def _floats(tokens, no, count):
    try:
        vals = [float(t) for t in tokens]
    except ValueError:
        raise FormatError(f"expected floats, got {' '.join(tokens)!r}", no) from None
    if len(vals) != count:
        raise FormatError(f"expected {count} values, got {len(vals)}", no)
    return vals


def _read_rows(lines, rows, cols, parse):
    out = []
    for _ in range(rows):
        try:
            no, toks = next(lines)
        except StopIteration:
            raise FormatError("unexpected end of file") from None
        out.append(parse(toks, no, cols))
    return out


def _expect_end(lines):
    for no, toks in lines:
        raise FormatError(f"trailing data {' '.join(toks)!r}", no)


def parse_graph(text: str) -> SimpleGraph:
    lines = _data_lines(text)
    try:
        no, toks = next(lines)
    except StopIteration:
        raise FormatError("empty graph file") from None
    n, m = _ints(toks, no, 2)
    if n < 0 or m < 0:
        raise FormatError("n and m must be nonnegative", no)
    adj = np.zeros((n, n), dtype=bool)
    seen = 0
    for no, toks in lines:
        u, v = _ints(toks, no, 2)
        if not (1 <= u <= n and 1 <= v <= n):
            raise FormatError(f"node id out of range 1..{n}: {u} {v}", no)
        if u == v:
            raise FormatError(f"loop at node {u}", no)
        if adj[u - 1, v - 1]:
            raise FormatError(f"duplicate edge {u} {v}", no)
        adj[u - 1, v - 1] = adj[v - 1, u - 1] = True
        seen += 1
    if seen != m:
        raise FormatError(f"header announces {m} edges, found {seen}")
    return SimpleGraph(adj)


def format_graph(G: SimpleGraph) -> str:
    rows = [f"{G.n} {G.num_edges}"] + [f"{i + 1} {j + 1}" for i, j in G.edges]
    return "\n".join(rows) + "\n"


def parse_colored(text: str) -> KColoredDigraph:
    lines = _data_lines(text)
    try:
        no, toks = next(lines)
    except StopIteration:
        raise FormatError("empty colored digraph file") from None
    n, k = _ints(toks, no, 2)
    rows = _read_rows(lines, n, n, _ints)
    _expect_end(lines)
    try:
        return KColoredDigraph(np.array(rows, dtype=np.int64).reshape(n, n), k)
    except ValueError as e:
        raise FormatError(str(e)) from None


def format_colored(L: KColoredDigraph) -> str:
    rows = [f"{L.n} {L.k}"] + [" ".join(str(int(c)) for c in row) for row in L.colors]
    return "\n".join(rows) + "\n"


def parse_fractional(text: str) -> FractionalColoring:
    lines = _data_lines(text)
    try:
        no, toks = next(lines)
    except StopIteration:
        raise FormatError("empty fractional coloring file") from None
    n, k = _ints(toks, no, 2)
    rows = _read_rows(lines, k * n, n, _floats)
    _expect_end(lines)
    try:
        return FractionalColoring(np.array(rows, dtype=float).reshape(k, n, n))
    except ValueError as e:
        raise FormatError(str(e)) from None


def _grid_lines(grid):
    return [" ".join(_fmt(x) for x in row) for row in grid]


def format_fractional(H: FractionalColoring) -> str:
    rows = [f"{H.n} {H.k}"]
    for h in range(H.k):
        rows += _grid_lines(H.beta[h])
    return "\n".join(rows) + "\n"


def _breakpoint_line(boundaries):
    return "breakpoints " + " ".join(_fmt(x) for x in boundaries[1:-1])


def _maybe_breakpoints(lines, m):
    """Optional ``breakpoints`` line for non-uniform partitions; returns (boundaries, pending)."""
    try:
        no, toks = next(lines)
    except StopIteration:
        return None, None
    if toks[0] != "breakpoints":
        return None, (no, toks)
    inner = _floats(toks[1:], no, m - 1)
    return np.array([0.0, *inner, 1.0]), None


def _chain(first, rest):
    if first is not None:
        yield first
    yield from rest


def parse_kernel(text: str):
    from .kernels import StepKernel

    lines = _data_lines(text)
    try:
        no, toks = next(lines)
    except StopIteration:
        raise FormatError("empty kernel file") from None
    if len(toks) != 2:
        raise FormatError("header must be 'm bound'", no)
    m = _ints(toks[:1], no, 1)[0]
    bound = _floats(toks[1:], no, 1)[0]
    boundaries, pending = _maybe_breakpoints(lines, m)
    lines = _chain(pending, lines)
    rows = _read_rows(lines, m, m, _floats)
    _expect_end(lines)
    try:
        return StepKernel(np.array(rows), bound=bound, boundaries=boundaries)
    except ValueError as e:
        raise FormatError(str(e)) from None


def format_kernel(W) -> str:
    rows = [f"{W.m} {_fmt(W.bound)}"]
    if not W.is_uniform:
        rows.append(_breakpoint_line(W.boundaries))
    rows += _grid_lines(W.values)
    return "\n".join(rows) + "\n"


def parse_digraphon(text: str):
    from .kernels import KDigraphon

    lines = _data_lines(text)
    try:
        no, toks = next(lines)
    except StopIteration:
        raise FormatError("empty digraphon file") from None
    k, m = _ints(toks, no, 2)
    boundaries, pending = _maybe_breakpoints(lines, m)
    lines = _chain(pending, lines)
    rows = _read_rows(lines, k * m, m, _floats)
    _expect_end(lines)
    try:
        return KDigraphon(np.array(rows).reshape(k, m, m), boundaries=boundaries)
    except ValueError as e:
        raise FormatError(str(e)) from None


def format_digraphon(Wd) -> str:
    rows = [f"{Wd.k} {Wd.m}"]
    if not Wd.is_uniform:
        rows.append(_breakpoint_line(Wd.boundaries))
    for h in range(Wd.k):
        rows += _grid_lines(Wd.layers[h])
    return "\n".join(rows) + "\n"


_PARSERS = {
    "graph": (parse_graph, format_graph),
    "colored": (parse_colored, format_colored),
    "fractional": (parse_fractional, format_fractional),
    "kernel": (parse_kernel, format_kernel),
    "digraphon": (parse_digraphon, format_digraphon),
}


def load(path, kind: str):
    parse, _ = _PARSERS[kind]
    return parse(Path(path).read_text())


def save(obj, path, kind: str) -> None:
    _, fmt = _PARSERS[kind]
    Path(path).write_text(fmt(obj))


def load_graph(path) -> SimpleGraph:
    return load(path, "graph")


def save_graph(G: SimpleGraph, path) -> None:
    save(G, path, "graph")


def load_colored(path) -> KColoredDigraph:
    return load(path, "colored")


def save_colored(L: KColoredDigraph, path) -> None:
    save(L, path, "colored")


def load_fractional(path) -> FractionalColoring:
    return load(path, "fractional")


def save_fractional(H: FractionalColoring, path) -> None:
    save(H, path, "fractional")


def load_kernel(path):
    return load(path, "kernel")


def save_kernel(W, path) -> None:
    save(W, path, "kernel")


def load_digraphon(path):
    return load(path, "digraphon")


def save_digraphon(Wd, path) -> None:
    save(Wd, path, "digraphon")
