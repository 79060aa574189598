"""Closed registry of graph properties, colored-digraph properties and parameters.

A :class:`PropertySpec` is a name plus parameters, e.g. ``max-cut-density(c=0.2)``
or ``color1-cut(t=4)``; text form ``"maxcut:c=0.2"``. New entries are added
with :func:`register_property` / :func:`register_parameter`.

The certificate property ``color1-cut(t)`` (alias ``bipartite-color-1``) holds
for a colored digraph when some node 2-coloring is crossed by at least t
ordered pairs of color 1. Since any edge of a graph may carry color 1 in both
directions, its shadow class is exactly ``2 * maxcut(G) >= t``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .graphs import KColoredDigraph, SimpleGraph, all_graphs
from .maxcut import (MAX_EXACT_N, all_cut_sizes, crossing_weights, maxcut_at_least,
                     maxcut_exact, maxcut_local)

MAX_CERT_N = 7
MAX_CERT_K = 3
MAX_EDIT_SEARCH_N = 7
SEARCH_BUDGET = 2_000_000


@dataclass(frozen=True)
class _Kind:
    domain: str  # "graph" or "colored"
    params: dict  # name -> (type, default, validator)
    holds: Callable
    d1: Callable | None = None
    witnesses: Callable | None = None
    prune: Callable | None = None
    doc: str = ""


_PROPERTIES: dict[str, _Kind] = {}
_ALIASES: dict[str, str] = {}


def register_property(name: str, kind: _Kind, aliases=()) -> None:
    _PROPERTIES[name] = kind
    for a in aliases:
        _ALIASES[a] = name


@dataclass(frozen=True)
class PropertySpec:
    name: str
    params: tuple = field(default=())

    def __post_init__(self):
        name = _ALIASES.get(self.name, self.name)
        if name not in _PROPERTIES:
            raise ValueError(f"unknown property {self.name!r}; known: {sorted(_PROPERTIES)}")
        kind = _PROPERTIES[name]
        given = dict(self.params)
        unknown = set(given) - set(kind.params)
        if unknown:
            raise ValueError(f"{name}: unknown parameters {sorted(unknown)}")
        values = {}
        for key, (typ, default, check) in kind.params.items():
            if key in given:
                v = typ(given[key])
            elif default is not None:
                v = default
            else:
                raise ValueError(f"{name}: missing parameter {key!r}")
            if check is not None and not check(v):
                raise ValueError(f"{name}: parameter {key}={v!r} out of range")
            values[key] = v
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "params", tuple(sorted(values.items())))

    @classmethod
    def make(cls, name: str, **params) -> "PropertySpec":
        return cls(name, tuple(params.items()))

    @classmethod
    def parse(cls, text: str) -> "PropertySpec":
        """``"name:key=value,key=value"``; nested specs go in brackets, e.g. ``q=[color1-cut:t=4]``."""
        name, _, rest = text.strip().partition(":")
        params, depth, cur = [], 0, ""
        for ch in rest:
            depth += ch == "["
            depth -= ch == "]"
            if ch == "," and depth == 0:
                params.append(cur)
                cur = ""
            else:
                cur += ch
        if cur:
            params.append(cur)
        kv = []
        for p in params:
            key, eq, val = p.partition("=")
            if not eq:
                raise ValueError(f"malformed parameter {p!r} in {text!r}")
            val = val.strip()
            if val.startswith("[") and val.endswith("]"):
                val = val[1:-1]
            kv.append((key.strip(), val))
        return cls(name, tuple(kv))

    @property
    def kind(self) -> _Kind:
        return _PROPERTIES[self.name]

    @property
    def domain(self) -> str:
        return self.kind.domain

    def __getitem__(self, key):
        return dict(self.params)[key]

    def holds(self, obj) -> bool:
        want = SimpleGraph if self.domain == "graph" else KColoredDigraph
        if not isinstance(obj, want):
            raise TypeError(f"{self.name} is a property of {self.domain} objects")
        return bool(self.kind.holds(obj, **dict(self.params)))

    def __str__(self):
        def show(v):
            return f"[{v}]" if isinstance(v, PropertySpec) else repr(v) if isinstance(v, float) else str(v)
        args = ",".join(f"{k}={show(v)}" for k, v in self.params)
        return f"{self.name}:{args}" if args else self.name


def _as_spec(v) -> PropertySpec:
    return v if isinstance(v, PropertySpec) else PropertySpec.parse(str(v))


# -- graph properties -------------------------------------------------------

def _need(c: float, n: int) -> int:
    """Smallest integer count >= c * n^2."""
    return max(0, math.ceil(c * n * n - 1e-9))


def _maxcut_holds(G, c):
    return maxcut_at_least(G.adjacency, _need(c, G.n))


def _balanced_masks(n):
    masks = np.arange(2 ** max(n - 1, 0), dtype=np.int64)
    size = np.bitwise_count(masks)
    return (size == n // 2) | (size == (n + 1) // 2), size


def _bisection_holds(G, c):
    if G.n <= 1:
        return _need(c, G.n) == 0
    balanced, _ = _balanced_masks(G.n)
    return int(all_cut_sizes(G.adjacency)[balanced].max()) >= _need(c, G.n)


def _cut_deficiency(G, c, allowed):
    """min over allowed bipartitions S of max(0, need - cut_G(S)), only where |S||V\\S| >= need."""
    n = G.n
    need = _need(c, n)
    cuts = all_cut_sizes(G.adjacency)
    _, size = _balanced_masks(n)
    capacity = size * (n - size)
    ok = allowed & (capacity >= need)
    if not ok.any():
        return math.inf
    return int(np.maximum(need - cuts[ok], 0).min())


def _maxcut_d1(G, c):
    n = G.n
    if n > MAX_EXACT_N:
        raise ValueError(f"closed-form d1 needs exact max cut, n <= {MAX_EXACT_N}")
    edits = _cut_deficiency(G, c, np.ones(2 ** max(n - 1, 0), dtype=bool))
    return edits / n**2


def _bisection_d1(G, c):
    n = G.n
    if n > MAX_EXACT_N:
        raise ValueError(f"closed-form d1 needs exact bisection, n <= {MAX_EXACT_N}")
    balanced, _ = _balanced_masks(n)
    return _cut_deficiency(G, c, balanced) / n**2


def _balanced_bipartite(n):
    return SimpleGraph.complete_bipartite(n // 2, n - n // 2)


def _density_holds(G, a, b):
    d = G.edge_density()
    return a - 1e-12 <= d <= b + 1e-12


def _density_d1(G, a, b):
    n, e = G.n, G.num_edges
    lo, hi = math.ceil(a * n * n / 2 - 1e-9), math.floor(b * n * n / 2 + 1e-9)
    lo, hi = max(lo, 0), min(hi, n * (n - 1) // 2)
    if lo > hi:
        return math.inf
    return (max(lo - e, 0) + max(e - hi, 0)) / n**2


def _density_witness(n, a, b):
    pairs = list(itertools.combinations(range(n), 2))
    target = max(math.ceil(a * n * n / 2 - 1e-9), 0)
    if target > len(pairs) or target > b * n * n / 2 + 1e-9:
        return []
    return [SimpleGraph.from_edges(n, pairs[:target])]


def _shadow_holds(G, q, k, m):
    return brute_force_certificate(G, q, k, m) is not None


_unit = lambda c: 0 <= c <= 1  # noqa: E731

register_property("max-cut-density", _Kind(
    "graph", {"c": (float, None, _unit)}, _maxcut_holds, d1=_maxcut_d1,
    witnesses=lambda n, c: [_balanced_bipartite(n)],
    doc="maximum cut has at least c*n^2 edges"), aliases=("maxcut",))
register_property("bipartite-cut-density", _Kind(
    "graph", {"c": (float, None, _unit)}, _bisection_holds, d1=_bisection_d1,
    witnesses=lambda n, c: [_balanced_bipartite(n)],
    doc="some balanced bipartition (bisection) is crossed by at least c*n^2 edges"),
    aliases=("bisection",))
register_property("edge-density-interval", _Kind(
    "graph", {"a": (float, None, _unit), "b": (float, None, _unit)}, _density_holds,
    d1=_density_d1, witnesses=_density_witness, doc="2|E|/n^2 lies in [a, b]"),
    aliases=("density",))
register_property("complete", _Kind(
    "graph", {}, lambda G: G.num_edges == G.n * (G.n - 1) // 2,
    witnesses=lambda n: [SimpleGraph.complete(n)]))
register_property("has-edge", _Kind(
    "graph", {}, lambda G: G.num_edges > 0,
    witnesses=lambda n: [SimpleGraph.from_edges(n, [(0, 1)])] if n >= 2 else []))
register_property("shadow-of", _Kind(
    "graph", {"q": (_as_spec, None, lambda q: q.domain == "colored"),
              "k": (int, None, lambda k: 1 <= k <= MAX_CERT_K), "m": (int, None, lambda m: m >= 1)},
    _shadow_holds, doc="Q' for a colored-digraph property Q: some certificate exists"))


# -- colored-digraph properties ------------------------------------------------

def _color1_weights(colors: np.ndarray) -> np.ndarray:
    return (colors == 1).astype(float)


def _color1_cut_holds(L, t):
    return crossing_weights(_color1_weights(L.colors)).max() >= t - 1e-9


def _color1_cut_prune(colors, adj, k, m, t):
    # undecided directed edges of G can always still take color 1
    w = (colors == 1) | ((colors < 0) & adj)
    return crossing_weights(w.astype(float)).max() >= t - 1e-9


def _mono_prune(colors, adj, k, m, h):
    return not ((colors > 0) & (colors != h)).any()


register_property("color1-cut", _Kind(
    "colored", {"t": (int, None, lambda t: t >= 0)}, _color1_cut_holds, prune=_color1_cut_prune,
    doc="some node 2-coloring is crossed by >= t ordered color-1 pairs"),
    aliases=("bipartite-color-1",))
register_property("monochrome", _Kind(
    "colored", {"h": (int, 1, lambda h: h >= 1)},
    lambda L, h: bool((L.colors[~np.eye(L.n, dtype=bool)] == h).all()), prune=_mono_prune,
    doc="every ordered pair has color h"))
register_property("any", _Kind("colored", {}, lambda L: True, prune=lambda *a: True,
                               doc="always true"))


# -- certificates -------------------------------------------------------------------

def _pair_options(colors, adj, i, j, k, m):
    if not adj[i, j]:
        return range(m + 1, k + 1)
    if i > j and colors[j, i] > m:
        return range(1, m + 1)
    return range(1, k + 1)


def brute_force_certificate(G: SimpleGraph, Q: PropertySpec, k: int, m: int,
                            prune: bool = True) -> KColoredDigraph | None:
    """Lexicographically first k-colored digraph L with shadow(L, m) = G and L in Q, or None.

    Depth-first over ordered pairs in row-major order with colors ascending.
    Branches whose partial shadow cannot equal G are never generated; Q's
    pruning hook (when present and ``prune`` is set) cuts branches that
    cannot reach Q. Limited to n <= 7 and k <= 3.
    """
    if G.n > MAX_CERT_N or k > MAX_CERT_K:
        raise ValueError(f"certificate search limited to n <= {MAX_CERT_N}, k <= {MAX_CERT_K}")
    if not 1 <= m <= k:
        raise ValueError(f"color threshold m={m} outside 1..{k}")
    if Q.domain != "colored":
        raise ValueError("certificate property must be a colored-digraph property")
    n = G.n
    adj = G.adjacency
    params = dict(Q.params)
    hook = Q.kind.prune if prune else None
    order = [(i, j) for i in range(n) for j in range(n) if i != j]
    colors = np.full((n, n), -1, dtype=np.int64)
    np.fill_diagonal(colors, 0)
    visited = 0

    def dfs(pos):
        nonlocal visited
        visited += 1
        if visited > SEARCH_BUDGET:
            raise RuntimeError("certificate search budget exhausted")
        if hook is not None and not hook(colors, adj, k, m, **params):
            return None
        if pos == len(order):
            L = KColoredDigraph(colors, k)
            return L if Q.holds(L) else None
        i, j = order[pos]
        for c in _pair_options(colors, adj, i, j, k, m):
            colors[i, j] = c
            found = dfs(pos + 1)
            if found is not None:
                return found
        colors[i, j] = -1
        return None

    return dfs(0)


# -- distances to properties -------------------------------------------------------

def d1_to_property(G: SimpleGraph, P: PropertySpec):
    from .distances import DistanceResult

    if P.domain != "graph":
        raise ValueError("d1 distance needs a graph property")
    params = dict(P.params)
    if P.kind.d1 is not None:
        return DistanceResult(float(P.kind.d1(G, **params)), True)
    return d1_by_search(G, P)


def d1_by_search(G: SimpleGraph, P: PropertySpec):
    """Exact edit distance to P by trying edit sets in order of increasing size (n <= 7)."""
    from .distances import DistanceResult

    n = G.n
    if n > MAX_EDIT_SEARCH_N:
        raise ValueError(f"property {P.name} has no distance procedure for n > {MAX_EDIT_SEARCH_N}")
    pairs = list(itertools.combinations(range(n), 2))
    base = np.array(G.adjacency)
    for size in range(len(pairs) + 1):
        for flips in itertools.combinations(pairs, size):
            adj = base.copy()
            for i, j in flips:
                adj[i, j] = adj[j, i] = not adj[i, j]
            H = SimpleGraph(adj)
            if P.holds(H):
                return DistanceResult(size / n**2, True, witness=H)
    return DistanceResult(math.inf, True)


def property_witnesses(P: PropertySpec, n: int) -> list[SimpleGraph]:
    """Finite list of members of P on n nodes, used as delta candidates."""
    params = dict(P.params)
    if P.kind.witnesses is not None:
        cands = P.kind.witnesses(n, **params)
    elif n <= 5:
        cands = list(all_graphs(n))
    else:
        raise ValueError(f"property {P.name} supplies no witness members")
    return [H for H in cands if P.holds(H)]


def delta_to_property(G: SimpleGraph, P: PropertySpec):
    """min of delta_cut_upper over witness members on G's node count; always an upper bound."""
    from .distances import MAX_PERM_N, DistanceResult, delta_cut_upper

    best = None
    for H in property_witnesses(P, G.n):
        mode = "exact-perm" if G.n <= MAX_PERM_N else "align-heuristic"
        d = delta_cut_upper(G, H, mode=mode)
        if best is None or d.value < best[0]:
            best = (d.value, H)
    if best is None:
        return DistanceResult(math.inf, False)
    return DistanceResult(best[0], False, witness=best[1])


# -- parameters ------------------------------------------------------------------------

@dataclass(frozen=True)
class _Param:
    domain: str
    value: Callable  # (obj) -> float
    upper_bound: Callable | None = None  # (partial colors, adj, k, m) -> float
    doc: str = ""


_PARAMETERS: dict[str, _Param] = {}


def register_parameter(name: str, param: _Param, aliases=()) -> None:
    _PARAMETERS[name] = param
    for a in aliases:
        _PARAMETERS[a] = param


def get_parameter(name: str) -> _Param:
    try:
        return _PARAMETERS[name]
    except KeyError:
        raise ValueError(f"unknown parameter {name!r}; known: {sorted(_PARAMETERS)}") from None


def normalized_maxcut(G: SimpleGraph, mode: str = "exact") -> float:
    if G.n == 0:
        return 0.0
    if mode == "exact":
        val, _ = maxcut_exact(G.adjacency)
    elif mode == "local-search":
        val, _ = maxcut_local(G.adjacency)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return val / G.n**2


def two_colored_edges(L: KColoredDigraph) -> float:
    """max over node 2-colorings of the ordered color-1 pairs it crosses, over n^2."""
    if L.n == 0:
        return 0.0
    return float(crossing_weights(_color1_weights(L.colors)).max()) / L.n**2


def _two_colored_bound(colors, adj, k, m):
    n = colors.shape[0]
    w = (colors == 1) | ((colors < 0) & adj)
    return float(crossing_weights(w.astype(float)).max()) / n**2


register_parameter("edge-density", _Param("graph", lambda G: G.edge_density(), doc="2|E|/n^2"))
register_parameter("normalized-maxcut", _Param("graph", normalized_maxcut, doc="maxcut/n^2"),
                   aliases=("maxcut",))
register_parameter("normalized-2-colored-edges", _Param(
    "colored", two_colored_edges, upper_bound=_two_colored_bound,
    doc="ordered color-1 pairs crossing the best node 2-coloring, over n^2"),
    aliases=("2-colored-edges",))


def registered_properties() -> dict[str, str]:
    return {name: kind.doc for name, kind in _PROPERTIES.items()}


def registered_parameters() -> dict[str, str]:
    return {name: p.doc for name, p in _PARAMETERS.items()}


__all__ = [
    "PropertySpec", "brute_force_certificate", "d1_to_property", "d1_by_search",
    "delta_to_property", "property_witnesses", "get_parameter", "normalized_maxcut",
    "two_colored_edges", "register_property", "register_parameter",
]
