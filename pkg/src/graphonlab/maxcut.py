"""Maximum cut: exact bipartition enumeration and local search.

Cut sizes count unordered edges. The last node is pinned to side 0 so every
bipartition {S, V\\S} is listed exactly once, 2^(n-1) in total.
"""
from __future__ import annotations

import numpy as np

from .sampling import as_generator

MAX_EXACT_N = 24


def _neighbour_masks(adj: np.ndarray) -> np.ndarray:
    n = adj.shape[0]
    weights = np.left_shift(np.int64(1), np.arange(n, dtype=np.int64))
    return (adj.astype(np.int64) * weights[None, :]).sum(axis=1)


def all_cut_sizes(adj: np.ndarray) -> np.ndarray:
    """Cut size of every bipartition; entry ``mask`` puts node i in S iff bit i is set.

    Nodes 0..n-2 range over all subsets, node n-1 stays outside S. Built by
    doubling: adding node b to S raises the cut by deg(b) - 2|N(b) & S|.
    """
    adj = np.asarray(adj, dtype=bool)
    n = adj.shape[0]
    if n > MAX_EXACT_N:
        raise ValueError(f"exact enumeration limited to n <= {MAX_EXACT_N}, got {n}")
    if n <= 1:
        return np.zeros(1, dtype=np.int64)
    nbr = _neighbour_masks(adj)
    deg = adj.sum(axis=1).astype(np.int64)
    cuts = np.zeros(1, dtype=np.int64)
    for b in range(n - 1):
        masks = np.arange(cuts.size, dtype=np.int64)
        inner = np.bitwise_count(masks & nbr[b]).astype(np.int64)
        cuts = np.concatenate([cuts, cuts + deg[b] - 2 * inner])
    return cuts


def mask_to_side(mask: int, n: int) -> np.ndarray:
    return ((int(mask) >> np.arange(n)) & 1).astype(bool)


def cut_size(adj: np.ndarray, side) -> int:
    side = np.asarray(side, dtype=bool)
    return int(np.asarray(adj, dtype=bool)[np.ix_(side, ~side)].sum())


def maxcut_exact(adj: np.ndarray) -> tuple[int, np.ndarray]:
    """(max cut size, side indicator of one optimal S)."""
    adj = np.asarray(adj, dtype=bool)
    cuts = all_cut_sizes(adj)
    best = int(np.argmax(cuts))
    return int(cuts[best]), mask_to_side(best, adj.shape[0])


def maxcut_local(adj: np.ndarray, starts: int = 16, rng=None) -> tuple[int, np.ndarray]:
    """Single-flip local search from random starts; returns a lower bound and its witness."""
    adj = np.asarray(adj, dtype=bool)
    n = adj.shape[0]
    if n <= 1:
        return 0, np.zeros(n, dtype=bool)
    rng = as_generator(0 if rng is None else rng)
    A = adj.astype(np.int64)
    best_val, best_side = -1, None
    for s in range(starts):
        side = rng.random(n) < 0.5 if s else np.arange(n) % 2 == 0
        while True:
            # gain of moving node i: same-side neighbours minus other-side neighbours
            same = (A * (side[None, :] == side[:, None])).sum(axis=1)
            gain = 2 * same - A.sum(axis=1)
            i = int(np.argmax(gain))
            if gain[i] <= 0:
                break
            side[i] = ~side[i]
        val = cut_size(adj, side)
        if val > best_val:
            best_val, best_side = val, side.copy()
    return best_val, best_side


def maxcut_at_least(adj: np.ndarray, target: float, starts: int = 4, rng=None) -> bool:
    """Exact decision ``maxcut >= target``.

    Cheap certificates are tried first: the edge count bounds the cut from
    above and local search from below. Enumeration runs only when both fail.
    """
    adj = np.asarray(adj, dtype=bool)
    if target <= 0:
        return True
    if np.triu(adj, 1).sum() < target:
        return False
    lower, _ = maxcut_local(adj, starts=starts, rng=rng)
    if lower >= target:
        return True
    return int(all_cut_sizes(adj).max()) >= target


def signed_bipartitions(n: int) -> np.ndarray:
    """All 2^(n-1) bipartitions as +-1 rows, node n-1 fixed to +1."""
    if n == 0:
        return np.ones((1, 0))
    masks = np.arange(2 ** (n - 1))
    bits = (masks[:, None] >> np.arange(n - 1)[None, :]) & 1
    s = 1.0 - 2.0 * bits
    return np.hstack([s, np.ones((s.shape[0], 1))])


def crossing_weights(weights: np.ndarray, signs: np.ndarray | None = None) -> np.ndarray:
    """sum_{i,j} w_ij [s_i != s_j] for each sign row; w may be asymmetric."""
    w = np.asarray(weights, dtype=float)
    if signs is None:
        signs = signed_bipartitions(w.shape[0])
    quad = np.einsum("bi,ij,bj->b", signs, w, signs)
    return (w.sum() - quad) / 2.0
