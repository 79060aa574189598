"""Oblivious testers, parameter estimation and certificate-based experiments."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .graphs import KColoredDigraph, SimpleGraph
from .maxcut import MAX_EXACT_N, maxcut_exact, maxcut_local
from .properties import (MAX_CERT_K, PropertySpec, brute_force_certificate, get_parameter)
from .sampling import as_generator, sample_induced, sample_induced_colored

Z95 = 1.959963984540054
MAX_CERTIFIED_N = 6


def default_margin(r: int) -> float:
    """Slack subtracted from c when testing a size-r sample: 1/r."""
    return 1.0 / r


@dataclass(frozen=True)
class TesterSpec:
    test_property: PropertySpec
    r: int
    trials: int = 1000
    accept_threshold: float = 2 / 3
    reject_threshold: float = 1 / 3

    def __post_init__(self):
        if self.r < 1 or self.trials < 1:
            raise ValueError("need r >= 1 and trials >= 1")
        if not 0 <= self.reject_threshold < self.accept_threshold <= 1:
            raise ValueError("thresholds must satisfy 0 <= reject < accept <= 1")
        if self.test_property.domain != "graph":
            raise ValueError("test property must be a graph property")


@dataclass(frozen=True)
class AcceptanceReport:
    probability: float
    halfwidth: float
    accepted: int
    trials: int

    def __float__(self):
        return self.probability

    def verdict(self, spec: TesterSpec) -> str:
        if self.probability >= spec.accept_threshold:
            return "accept"
        if self.probability <= spec.reject_threshold:
            return "reject"
        return "undecided"


def acceptance_probability(G: SimpleGraph, spec: TesterSpec, rng) -> AcceptanceReport:
    """Fraction of ``spec.trials`` samples G(r, G) that have the test property.

    ``halfwidth`` is the normal-approximation 95% binomial interval halfwidth.
    """
    if spec.r > G.n:
        raise ValueError(f"sample size r={spec.r} exceeds |V(G)|={G.n}")
    g = as_generator(rng)
    hits = sum(spec.test_property.holds(sample_induced(G, spec.r, g)) for _ in range(spec.trials))
    p = hits / spec.trials
    return AcceptanceReport(p, Z95 * math.sqrt(p * (1 - p) / spec.trials), hits, spec.trials)


@dataclass(frozen=True)
class MaxCutResult:
    value: float
    side: tuple[int, ...]
    exact: bool

    def __float__(self):
        return self.value


def maxcut_density(G: SimpleGraph, mode: str = "exact", rng=None) -> MaxCutResult:
    """max over bipartitions of crossing edges, over n^2. Local search gives a lower bound."""
    if G.n == 0:
        return MaxCutResult(0.0, (), True)
    if mode == "exact":
        if G.n > MAX_EXACT_N:
            raise ValueError(f"exact max cut limited to n <= {MAX_EXACT_N}")
        val, side = maxcut_exact(G.adjacency)
    elif mode == "local-search":
        val, side = maxcut_local(G.adjacency, rng=as_generator(rng) if rng is not None else None)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return MaxCutResult(val / G.n**2, tuple(np.flatnonzero(side).tolist()), mode == "exact")


def tester_for_maxcut(c: float, r: int = 12, trials: int = 1000,
                      margin: Callable[[int], float] = default_margin) -> TesterSpec:
    """Sample-based tester for 'max cut >= c n^2': accept iff the sample's max cut density >= c - margin(r)."""
    if not 0 < c < 1:
        raise ValueError("c must lie in (0, 1)")
    threshold = min(max(c - margin(r), 0.0), 1.0)
    return TesterSpec(PropertySpec.make("max-cut-density", c=threshold), r, trials)


@dataclass(frozen=True)
class EstimateReport:
    point_estimate: float
    trials: int
    empirical_deviation: float
    epsilon: float
    delta: float
    values: tuple[float, ...] = field(repr=False)
    true_value: float | None = None


def estimate_parameter(G, f: str, sample_k: int, trials: int, rng, epsilon: float = 0.1) -> EstimateReport:
    """Estimate f(G) from f(G[X]) over random k-sets X.

    With f(G) computable exactly, ``empirical_deviation`` is max |f(G) - f(G[X])|
    and ``delta`` the fraction of trials deviating by more than ``epsilon``.
    Otherwise the deviation is the spread (max - min) of the sample values and
    ``delta`` is NaN. ``G`` may be a colored digraph for colored parameters.
    """
    param = get_parameter(f)
    colored = isinstance(G, KColoredDigraph)
    if colored != (param.domain == "colored"):
        raise ValueError(f"parameter {f!r} applies to {param.domain} objects")
    if not 1 <= sample_k <= G.n:
        raise ValueError(f"sample size {sample_k} outside 1..{G.n}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    g = as_generator(rng)
    draw = sample_induced_colored if colored else sample_induced
    vals = np.array([param.value(draw(G, sample_k, g)) for _ in range(trials)])
    true = None
    if colored or f not in ("normalized-maxcut", "maxcut") or G.n <= MAX_EXACT_N:
        true = float(param.value(G))
    if true is not None:
        dev = np.abs(vals - true)
        return EstimateReport(float(vals.mean()), trials, float(dev.max()), epsilon,
                              float((dev > epsilon).mean()), tuple(vals.tolist()), true)
    return EstimateReport(float(vals.mean()), trials, float(vals.max() - vals.min()), epsilon,
                          math.nan, tuple(vals.tolist()), None)


# -- certificates ---------------------------------------------------------------

def _options(colors, adj, i, j, k, m):
    """Colors for i -> j that keep the shadow equal to G given the color of j -> i."""
    if not adj[i, j]:
        return list(range(m + 1, k + 1))
    if colors[j, i] > m:
        return list(range(1, m + 1))
    return list(range(1, k + 1))


@dataclass(frozen=True)
class CertifiedValue:
    value: float
    witness: KColoredDigraph | None
    exact: bool

    def __float__(self):
        return self.value


def _certified_exact(G, param, k, m):
    n = G.n
    adj = G.adjacency
    order = [(i, j) for i in range(n) for j in range(n) if i != j]
    colors = np.full((n, n), -1, dtype=np.int64)
    np.fill_diagonal(colors, 0)
    best = [-math.inf, None]

    def dfs(pos):
        if pos == len(order):
            L = KColoredDigraph(colors, k)
            v = param.value(L)
            if v > best[0]:
                best[0], best[1] = v, L
            return
        if param.upper_bound is not None and param.upper_bound(colors, adj, k, m) <= best[0]:
            return
        i, j = order[pos]
        for c in _options(colors, adj, i, j, k, m):
            colors[i, j] = c
            dfs(pos + 1)
        colors[i, j] = -1

    dfs(0)
    return CertifiedValue(float(best[0]), best[1], True)


def _random_certificate(G, k, m, g):
    n = G.n
    adj = G.adjacency
    colors = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            if adj[i, j]:
                a = int(g.integers(1, k + 1))
                b = int(g.integers(1, k + 1)) if a <= m else int(g.integers(1, m + 1))
            else:
                a, b = (int(x) for x in g.integers(m + 1, k + 1, size=2))
            colors[i, j], colors[j, i] = a, b
    return colors


def _certified_heuristic(G, param, k, m, g, steps, t0):
    n = G.n
    adj = G.adjacency
    colors = _random_certificate(G, k, m, g)
    cur = param.value(KColoredDigraph(colors, k))
    best, best_colors = cur, colors.copy()
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j and adj[i, j]]
    if not pairs:
        return CertifiedValue(best, KColoredDigraph(best_colors, k), False)
    for step in range(steps):
        i, j = pairs[int(g.integers(len(pairs)))]
        opts = [c for c in _options(colors, adj, i, j, k, m) if c != colors[i, j]]
        if not opts:
            continue
        old = colors[i, j]
        colors[i, j] = opts[int(g.integers(len(opts)))]
        v = param.value(KColoredDigraph(colors, k))
        temp = t0 * (1 - step / steps)
        if v >= cur or (temp > 0 and g.random() < math.exp((v - cur) / temp)):
            cur = v
            if v > best:
                best, best_colors = v, colors.copy()
        else:
            colors[i, j] = old
    return CertifiedValue(float(best), KColoredDigraph(best_colors, k), False)


def certified_parameter(G: SimpleGraph, g: str, k: int, m: int, mode: str = "exact", rng=None,
                        steps: int = 2000, temperature: float = 0.02) -> CertifiedValue:
    """g'(G) = max of the colored parameter g over colored digraphs L with shadow(L, m) = G.

    Exact mode enumerates shadow-preserving colorings with branch and bound
    (n <= 6, k <= 3); heuristic mode anneals over single-pair recolorings that
    keep the shadow fixed and returns a lower bound.
    """
    param = get_parameter(g)
    if param.domain != "colored":
        raise ValueError(f"{g!r} is not a colored-digraph parameter")
    if not 1 <= m <= k:
        raise ValueError(f"color threshold m={m} outside 1..{k}")
    if m == k and G.num_edges < G.n * (G.n - 1) // 2:
        raise ValueError("m = k leaves no color for non-edges")
    if mode == "exact":
        if G.n > MAX_CERTIFIED_N or k > MAX_CERT_K:
            raise ValueError(f"exact mode limited to n <= {MAX_CERTIFIED_N}, k <= {MAX_CERT_K}")
        return _certified_exact(G, param, k, m)
    if mode == "heuristic":
        return _certified_heuristic(G, param, k, m, as_generator(rng), steps, temperature)
    raise ValueError(f"unknown mode {mode!r}")


def nd_membership(G: SimpleGraph, Q: PropertySpec, k: int, m: int) -> bool:
    """True iff G has a certificate: some L in Q with shadow(L, m) = G (n <= 7, k <= 3)."""
    return brute_force_certificate(G, Q, k, m) is not None


def color1_cut_characterization(G: SimpleGraph, t: int) -> bool:
    """Direct test for the shadow class of color1-cut(t): 2 * maxcut(G) >= t."""
    val, _ = maxcut_exact(G.adjacency)
    return 2 * val >= t
