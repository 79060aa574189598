"""Random constructions, all driven by explicit seeded streams.

Every sampler takes ``rng`` as an :class:`RngSpec`, a ``numpy.random.Generator``
or an int seed. An RngSpec names a substream by (master_seed, stream_id), so
trial t of an experiment draws the same numbers whether trials run serially
or in parallel.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import FractionalColoring, KColoredDigraph, SimpleGraph
from .kernels import KDigraphon, StepKernel, symmetrize_check


@dataclass(frozen=True)
class RngSpec:
    master_seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.master_seed, spawn_key=(self.stream_id,))
        return np.random.Generator(np.random.PCG64(ss))

    def child(self, *keys: int) -> "RngSpec":
        """Deterministic derived stream, e.g. ``spec.child(n, trial)``."""
        ss = np.random.SeedSequence(self.master_seed, spawn_key=(self.stream_id, *keys))
        return RngSpec(self.master_seed, int(ss.generate_state(1, np.uint64)[0] >> np.uint64(1)))


def as_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngSpec):
        return rng.generator()
    if rng is None or isinstance(rng, (int, np.integer)):
        return np.random.default_rng(rng)
    raise TypeError(f"cannot make a random generator from {type(rng).__name__}")


def ordered_sample(n: int, r: int, rng) -> np.ndarray:
    """Uniform ordered r-tuple of distinct elements of range(n) by partial Fisher-Yates."""
    if not 1 <= r <= n:
        raise ValueError(f"sample size r={r} outside 1..{n}")
    g = as_generator(rng)
    pool = np.arange(n)
    for t in range(r):
        s = int(g.integers(t, n))
        pool[t], pool[s] = pool[s], pool[t]
    return pool[:r].copy()


def sample_induced(G: SimpleGraph, r: int, rng) -> SimpleGraph:
    """G(r, G): induced subgraph on a uniform ordered r-tuple, relabeled in draw order."""
    return G.relabel(ordered_sample(G.n, r, rng))


def sample_induced_colored(L: KColoredDigraph, r: int, rng) -> KColoredDigraph:
    return L.relabel(ordered_sample(L.n, r, rng))


def _categorical(cum: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Color index (0-based) for uniforms ``u`` against cumulative weights ``cum`` (k leading)."""
    k = cum.shape[0]
    return np.minimum((u[None] >= cum[:-1]).sum(axis=0), k - 1)


def _cells(boundaries: np.ndarray, x: np.ndarray) -> np.ndarray:
    m = boundaries.size - 1
    return np.clip(np.searchsorted(boundaries, x, side="right") - 1, 0, m - 1)


def sample_from_digraphon(Wd: KDigraphon, r: int, rng, return_positions: bool = False):
    """G(r, W): uniform latent points, each ordered pair colored h w.p. W^h(X_i, X_j)."""
    if r < 1:
        raise ValueError("r must be >= 1")
    g = as_generator(rng)
    x = g.random(r)
    c = _cells(Wd.boundaries, x)
    probs = Wd.layers[:, c][:, :, c]
    col = _categorical(np.cumsum(probs, axis=0), g.random((r, r))) + 1
    np.fill_diagonal(col, 0)
    L = KColoredDigraph(col, Wd.k)
    return (L, x) if return_positions else L


def sample_graph_from_graphon(U: StepKernel, n: int, rng, sort_positions: bool = False,
                              return_positions: bool = False):
    """W-random graph: edge {i, j} independently with probability U(X_i, X_j).

    ``sort_positions`` labels the nodes in increasing order of their latent
    points, which lines the graph up with U so that labeled distances to U
    are small.
    """
    if symmetrize_check(U) > 1e-9:
        raise ValueError("graphon must be symmetric")
    if U.values.min() < 0 or U.values.max() > 1:
        raise ValueError("graphon values must lie in [0, 1]")
    if n < 1:
        raise ValueError("n must be >= 1")
    g = as_generator(rng)
    x = g.random(n)
    if sort_positions:
        x = np.sort(x)
    c = _cells(U.boundaries, x)
    p = U.values[np.ix_(c, c)]
    upper = np.triu(g.random((n, n)) < p, 1)
    G = SimpleGraph(upper | upper.T)
    return (G, x) if return_positions else G


def round_coloring(H: FractionalColoring, rng, coupling: str = "independent") -> KColoredDigraph:
    """L(H): color each ordered pair h with probability beta^h(i, j).

    ``coupling="independent"`` draws every ordered pair separately.
    ``coupling="joint"`` reuses one uniform for (i, j) and (j, i), which keeps
    the two directions in matching color blocks whenever their weights share
    the same support split (as pullback colorings do).
    """
    g = as_generator(rng)
    n = H.n
    if coupling == "independent":
        u = g.random((n, n))
    elif coupling == "joint":
        u = np.triu(g.random((n, n)), 1)
        u = u + u.T
    else:
        raise ValueError(f"unknown coupling {coupling!r}")
    col = _categorical(np.cumsum(H.beta, axis=0), u) + 1
    # zero-weight colors are never chosen, even against rounding in the cumsum
    chosen = np.take_along_axis(H.beta, (col - 1)[None], axis=0)[0]
    bad = (chosen == 0) & ~np.eye(n, dtype=bool)
    if bad.any():
        col[bad] = np.argmax(H.beta[:, bad] > 0, axis=0) + 1
    np.fill_diagonal(col, 0)
    return KColoredDigraph(col, H.k)


def random_fractional(n: int, k: int, rng, concentration: float = 1.0) -> FractionalColoring:
    """Independent Dirichlet(concentration) weights on every ordered pair."""
    g = as_generator(rng)
    beta = np.moveaxis(g.dirichlet(np.full(k, concentration), size=(n, n)), -1, 0)
    # dirichlet can miss 1 by an ulp; for k = 1 this makes beta exactly 1
    return FractionalColoring(beta / beta.sum(axis=0))


def random_colored(n: int, k: int, rng) -> KColoredDigraph:
    g = as_generator(rng)
    col = g.integers(1, k + 1, size=(n, n))
    np.fill_diagonal(col, 0)
    return KColoredDigraph(col, k)


def erdos_renyi(n: int, p: float, rng) -> SimpleGraph:
    g = as_generator(rng)
    upper = np.triu(g.random((n, n)) < p, 1)
    return SimpleGraph(upper | upper.T)


def planted_bisection(n: int, p_in: float, p_out: float, rng) -> SimpleGraph:
    """Nodes 0..n//2-1 form one side; inside pairs get p_in, crossing pairs p_out."""
    g = as_generator(rng)
    side = np.arange(n) >= n // 2
    p = np.where(side[:, None] == side[None, :], p_in, p_out)
    upper = np.triu(g.random((n, n)) < p, 1)
    return SimpleGraph(upper | upper.T)


def _parse_args(family, arg_str, types):
    parts = [a for a in arg_str.split(",") if a] if arg_str else []
    if len(parts) != len(types):
        raise ValueError(f"{family} expects {len(types)} arguments, got {len(parts)}")
    return [t(a) for t, a in zip(types, parts)]


GENERATORS = {
    "er": ((int, float), lambda g, n, p: erdos_renyi(n, p, g)),
    "bisect": ((int, float, float), lambda g, n, pi, po: planted_bisection(n, pi, po, g)),
    "cycle": ((int,), lambda g, n: SimpleGraph.cycle(n)),
    "complete": ((int,), lambda g, n: SimpleGraph.complete(n)),
    "empty": ((int,), lambda g, n: SimpleGraph.empty(n)),
    "bipartite": ((int, int), lambda g, a, b: SimpleGraph.complete_bipartite(a, b)),
}


def generate(spec: str, rng=None) -> SimpleGraph:
    """Graph from a family spec string such as ``"er:100,0.5"`` or ``"cycle:5"``.

    Families: er:n,p  bisect:n,p_in,p_out  cycle:n  complete:n  empty:n  bipartite:a,b
    """
    family, _, args = spec.partition(":")
    try:
        types, make = GENERATORS[family]
    except KeyError:
        raise ValueError(f"unknown graph family {family!r}; known: {sorted(GENERATORS)}") from None
    return make(as_generator(rng), *_parse_args(family, args, types))
