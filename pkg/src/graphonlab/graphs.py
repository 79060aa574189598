"""Combinatorial objects: simple graphs, k-colored digraphs and fractional colorings.

All three are immutable wrappers around numpy arrays. Nodes are 0-based.
"""
from __future__ import annotations

import itertools
from typing import Iterable

import numpy as np

SUM_TOL = 1e-9


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


class SimpleGraph:
    """Undirected simple graph on nodes 0..n-1, stored as a boolean adjacency matrix."""

    __slots__ = ("_adj",)

    def __init__(self, adjacency):
        adj = np.asarray(adjacency)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ValueError(f"adjacency must be square, got shape {adj.shape}")
        if not np.isin(adj, (0, 1)).all():
            raise ValueError("adjacency entries must be 0/1")
        adj = adj.astype(bool)
        if adj.diagonal().any():
            raise ValueError("simple graph cannot have loops")
        if not (adj == adj.T).all():
            raise ValueError("adjacency must be symmetric")
        self._adj = _frozen(adj)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "SimpleGraph":
        if n < 0:
            raise ValueError("n must be nonnegative")
        adj = np.zeros((n, n), dtype=bool)
        for i, j in edges:
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"node id out of range in edge ({i}, {j})")
            if i == j:
                raise ValueError(f"loop at node {i}")
            if adj[i, j]:
                raise ValueError(f"duplicate edge ({i}, {j})")
            adj[i, j] = adj[j, i] = True
        return cls(adj)

    @classmethod
    def empty(cls, n: int) -> "SimpleGraph":
        return cls(np.zeros((n, n), dtype=bool))

    @classmethod
    def complete(cls, n: int) -> "SimpleGraph":
        return cls(~np.eye(n, dtype=bool))

    @classmethod
    def cycle(cls, n: int) -> "SimpleGraph":
        if n < 3:
            raise ValueError("cycle needs n >= 3")
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def complete_bipartite(cls, a: int, b: int) -> "SimpleGraph":
        side = np.r_[np.zeros(a, bool), np.ones(b, bool)]
        return cls(side[:, None] != side[None, :])

    @property
    def n(self) -> int:
        return self._adj.shape[0]

    @property
    def adjacency(self) -> np.ndarray:
        return self._adj

    @property
    def edges(self) -> list[tuple[int, int]]:
        i, j = np.nonzero(np.triu(self._adj, 1))
        return list(zip(i.tolist(), j.tolist()))

    @property
    def num_edges(self) -> int:
        return int(np.triu(self._adj, 1).sum())

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self._adj[i, j])

    def edge_density(self) -> float:
        """2|E|/n^2, the integral of the associated graphon."""
        return 2.0 * self.num_edges / self.n**2 if self.n else 0.0

    def relabel(self, order) -> "SimpleGraph":
        """Graph whose node t is node ``order[t]`` of this graph (an induced subgraph if short)."""
        order = np.asarray(order, dtype=int)
        return SimpleGraph(self._adj[np.ix_(order, order)])

    def __eq__(self, other):
        return isinstance(other, SimpleGraph) and np.array_equal(self._adj, other._adj)

    def __hash__(self):
        return hash((self.n, self._adj.tobytes()))

    def __repr__(self):
        return f"SimpleGraph(n={self.n}, edges={self.num_edges})"


class KColoredDigraph:
    """Complete digraph on n nodes with every ordered pair colored from 1..k.

    ``colors[i, j]`` is the color of i -> j; the diagonal holds 0.
    """

    __slots__ = ("_colors", "_k")

    def __init__(self, colors, k: int):
        c = np.asarray(colors)
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise ValueError(f"color matrix must be square, got shape {c.shape}")
        if k < 1:
            raise ValueError("k must be >= 1")
        c = c.astype(np.int64)
        n = c.shape[0]
        off = ~np.eye(n, dtype=bool)
        if n and (c[off].min(initial=1) < 1 or c[off].max(initial=1) > k):
            raise ValueError(f"colors must lie in 1..{k}")
        if c.diagonal().any():
            raise ValueError("diagonal of a colored digraph must be 0")
        self._colors = _frozen(c)
        self._k = int(k)

    @classmethod
    def constant(cls, n: int, k: int, color: int = 1) -> "KColoredDigraph":
        c = np.full((n, n), color, dtype=np.int64)
        np.fill_diagonal(c, 0)
        return cls(c, k)

    @property
    def n(self) -> int:
        return self._colors.shape[0]

    @property
    def k(self) -> int:
        return self._k

    @property
    def colors(self) -> np.ndarray:
        return self._colors

    def color(self, i: int, j: int) -> int:
        if i == j:
            raise ValueError("diagonal pairs have no color")
        return int(self._colors[i, j])

    def relabel(self, order) -> "KColoredDigraph":
        order = np.asarray(order, dtype=int)
        return KColoredDigraph(self._colors[np.ix_(order, order)], self._k)

    def indicator(self) -> "FractionalColoring":
        """The fractional coloring whose weights are the color indicators."""
        beta = (self._colors[None, :, :] == np.arange(1, self._k + 1)[:, None, None]).astype(float)
        return FractionalColoring(beta)

    def __eq__(self, other):
        return (isinstance(other, KColoredDigraph) and self._k == other._k
                and np.array_equal(self._colors, other._colors))

    def __hash__(self):
        return hash((self._k, self._colors.tobytes()))

    def __repr__(self):
        return f"KColoredDigraph(n={self.n}, k={self.k})"


class FractionalColoring:
    """k nonnegative weights per ordered pair summing to 1.

    ``beta[h-1, i, j]`` is the weight of color h on i -> j. The diagonal is
    stored too: a diagonal that is all zeros on input is filled with the
    uniform distribution 1/k, otherwise it must sum to 1 like any other pair.
    """

    __slots__ = ("_beta",)

    def __init__(self, beta):
        b = np.array(beta, dtype=float)
        if b.ndim != 3 or b.shape[1] != b.shape[2] or b.shape[0] < 1:
            raise ValueError(f"beta must have shape (k, n, n), got {b.shape}")
        k, n, _ = b.shape
        if not np.isfinite(b).all() or (b < -SUM_TOL).any() or (b > 1 + SUM_TOL).any():
            raise ValueError("weights must lie in [0, 1]")
        idx = np.arange(n)
        if n and not b[:, idx, idx].any():
            b[:, idx, idx] = 1.0 / k
        s = b.sum(axis=0)
        if n and np.abs(s - 1.0).max() > SUM_TOL:
            i, j = np.unravel_index(np.argmax(np.abs(s - 1.0)), s.shape)
            raise ValueError(f"weights at ({i}, {j}) sum to {s[i, j]!r}, not 1")
        np.clip(b, 0.0, 1.0, out=b)
        self._beta = _frozen(b)

    @property
    def k(self) -> int:
        return self._beta.shape[0]

    @property
    def n(self) -> int:
        return self._beta.shape[1]

    @property
    def beta(self) -> np.ndarray:
        return self._beta

    def weight(self, h: int, i: int, j: int) -> float:
        return float(self._beta[h - 1, i, j])

    def __eq__(self, other):
        return isinstance(other, FractionalColoring) and np.array_equal(self._beta, other._beta)

    def __hash__(self):
        return hash(self._beta.tobytes())

    def __repr__(self):
        return f"FractionalColoring(n={self.n}, k={self.k})"


def _check_threshold(L: KColoredDigraph, m: int) -> None:
    if not 1 <= m <= L.k:
        raise ValueError(f"color threshold m={m} outside 1..{L.k}")


def shadow(L: KColoredDigraph, m: int) -> SimpleGraph:
    """Keep colors 1..m, forget orientation: {i,j} is an edge if either direction has color <= m."""
    _check_threshold(L, m)
    kept = (L.colors >= 1) & (L.colors <= m)
    return SimpleGraph(kept | kept.T)


def is_consistent_coloring(L: KColoredDigraph, m: int) -> bool:
    """True iff for every pair both directions agree on being kept (color <= m) or not."""
    _check_threshold(L, m)
    kept = L.colors <= m
    np.fill_diagonal(kept, False)
    return bool((kept == kept.T).all())


def all_graphs(n: int):
    """Every labeled simple graph on n nodes (2^(n choose 2) of them)."""
    pairs = list(itertools.combinations(range(n), 2))
    for bits in itertools.product((0, 1), repeat=len(pairs)):
        yield SimpleGraph.from_edges(n, [p for p, b in zip(pairs, bits) if b])
