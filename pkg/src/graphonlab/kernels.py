"""Step-function kernels and k-digraphons on interval partitions of [0, 1].

A step function is a grid of values plus the boundaries of its steps. Most
objects live on the equal partition S_m, but averaging over an arbitrary
interval partition returns its result on the common refinement, which is
generally not equal-width, so boundaries are carried explicitly.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .graphs import SUM_TOL, FractionalColoring, KColoredDigraph, SimpleGraph

MERGE_TOL = 1e-12
DEGENERATE_EPS = 1e-12


def equal_boundaries(m: int) -> np.ndarray:
    return np.arange(m + 1) / m


def _check_boundaries(b: np.ndarray, m: int) -> np.ndarray:
    b = np.asarray(b, dtype=float)
    if b.shape != (m + 1,):
        raise ValueError(f"expected {m + 1} boundaries, got {b.shape}")
    if b[0] != 0.0 or b[-1] != 1.0:
        raise ValueError("boundaries must start at 0 and end at 1")
    if not (np.diff(b) > MERGE_TOL).all():
        raise ValueError("boundaries must be strictly increasing with positive-measure steps")
    return b


def common_boundaries(*bs: np.ndarray) -> np.ndarray:
    """Boundaries of the common refinement; points closer than MERGE_TOL are merged."""
    pts = np.sort(np.concatenate(bs))
    keep = np.r_[True, np.diff(pts) > MERGE_TOL]
    out = pts[keep]
    out[0], out[-1] = 0.0, 1.0
    return out


def _cell_index(src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """For each cell of partition ``dst``, the cell of ``src`` containing it."""
    mids = (dst[:-1] + dst[1:]) / 2
    return np.searchsorted(src, mids, side="right") - 1


@dataclass(frozen=True, eq=False)
class PartitionSpec:
    """Interval partition of [0, 1] given by its class boundaries."""

    boundaries: np.ndarray

    def __post_init__(self):
        b = np.array(self.boundaries, dtype=float)
        _check_boundaries(b, b.size - 1)
        b.setflags(write=False)
        object.__setattr__(self, "boundaries", b)

    @classmethod
    def equal(cls, n: int) -> "PartitionSpec":
        if n < 1:
            raise ValueError("partition needs at least one class")
        return cls(equal_boundaries(n))

    @classmethod
    def from_breakpoints(cls, breakpoints) -> "PartitionSpec":
        """Partition with the given interior breakpoints (strictly increasing in (0, 1))."""
        return cls(np.r_[0.0, np.asarray(breakpoints, dtype=float), 1.0])

    @property
    def q(self) -> int:
        return self.boundaries.size - 1

    @property
    def measures(self) -> np.ndarray:
        return np.diff(self.boundaries)


class StepKernel:
    """Bounded function on [0,1]^2, constant on the cells of an interval partition.

    ``values[i, j]`` is the value on step_i x step_j. Symmetry is not required
    (dikernels are step kernels too).
    """

    __slots__ = ("_values", "_bound", "_boundaries")

    def __init__(self, values, bound: float | None = None, boundaries=None):
        v = np.array(values, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1] or v.shape[0] < 1:
            raise ValueError(f"values must be a nonempty square grid, got {v.shape}")
        if not np.isfinite(v).all():
            raise ValueError("values must be finite")
        m = v.shape[0]
        vmax = float(np.abs(v).max())
        if bound is None:
            bound = max(1.0, vmax)
        if vmax > bound + SUM_TOL:
            raise ValueError(f"value {vmax} exceeds declared bound {bound}")
        b = equal_boundaries(m) if boundaries is None else _check_boundaries(boundaries, m)
        v.setflags(write=False)
        b = np.array(b)
        b.setflags(write=False)
        self._values, self._bound, self._boundaries = v, float(bound), b

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def bound(self) -> float:
        return self._bound

    @property
    def boundaries(self) -> np.ndarray:
        return self._boundaries

    @property
    def m(self) -> int:
        return self._values.shape[0]

    @property
    def measures(self) -> np.ndarray:
        return np.diff(self._boundaries)

    @property
    def is_uniform(self) -> bool:
        return np.array_equal(self._boundaries, equal_boundaries(self.m))

    def refine(self, boundaries) -> "StepKernel":
        """Same function on a finer partition (``boundaries`` must refine ours)."""
        b = np.asarray(boundaries, dtype=float)
        idx = _cell_index(self._boundaries, b)
        return StepKernel(self._values[np.ix_(idx, idx)], self._bound, b)

    def l1_norm(self) -> float:
        w = self.measures
        return float((np.abs(self._values) * np.outer(w, w)).sum())

    def integral(self) -> float:
        w = self.measures
        return float((self._values * np.outer(w, w)).sum())

    def transpose(self) -> "StepKernel":
        return StepKernel(self._values.T, self._bound, self._boundaries)

    def __call__(self, x, y):
        i = np.clip(np.searchsorted(self._boundaries, x, side="right") - 1, 0, self.m - 1)
        j = np.clip(np.searchsorted(self._boundaries, y, side="right") - 1, 0, self.m - 1)
        return self._values[i, j]

    def _binary(self, other, op, bound):
        if np.isscalar(other):
            return StepKernel(op(self._values, other), bound(abs(other)), self._boundaries)
        a, b = align(self, other)
        return StepKernel(op(a.values, b.values), bound(other.bound), a.boundaries)

    def __sub__(self, other):
        return self._binary(other, np.subtract, lambda ob: self._bound + ob)

    def __add__(self, other):
        return self._binary(other, np.add, lambda ob: self._bound + ob)

    def __mul__(self, other):
        return self._binary(other, np.multiply, lambda ob: self._bound * ob)

    def __neg__(self):
        return StepKernel(-self._values, self._bound, self._boundaries)

    def __eq__(self, other):
        return (isinstance(other, StepKernel) and np.array_equal(self._values, other._values)
                and np.array_equal(self._boundaries, other._boundaries))

    __hash__ = None

    def __repr__(self):
        return f"StepKernel(m={self.m}, bound={self._bound:g}{'' if self.is_uniform else ', non-uniform'})"


def align(W1: StepKernel, W2: StepKernel) -> tuple[StepKernel, StepKernel]:
    """Both kernels on their common refinement."""
    if np.array_equal(W1.boundaries, W2.boundaries):
        return W1, W2
    b = common_boundaries(W1.boundaries, W2.boundaries)
    return W1.refine(b), W2.refine(b)


class KDigraphon:
    """k step digraphons on a common partition summing to 1 at every cell.

    ``layers[h-1]`` is the grid of color h.
    """

    __slots__ = ("_layers", "_boundaries")

    def __init__(self, layers, boundaries=None):
        L = np.array(layers, dtype=float)
        if L.ndim != 3 or L.shape[1] != L.shape[2] or L.shape[0] < 1 or L.shape[1] < 1:
            raise ValueError(f"layers must have shape (k, m, m), got {L.shape}")
        if (L < -SUM_TOL).any() or (L > 1 + SUM_TOL).any():
            raise ValueError("layer values must lie in [0, 1]")
        drift = np.abs(L.sum(axis=0) - 1.0).max()
        if drift > SUM_TOL:
            raise ValueError(f"layers must sum to 1 at every cell (max drift {drift:.3g})")
        np.clip(L, 0.0, 1.0, out=L)
        m = L.shape[1]
        b = equal_boundaries(m) if boundaries is None else _check_boundaries(boundaries, m)
        L.setflags(write=False)
        b = np.array(b)
        b.setflags(write=False)
        self._layers, self._boundaries = L, b

    @classmethod
    def from_colored(cls, L: KColoredDigraph, diagonal_color: int | None = None) -> "KDigraphon":
        """Indicator k-digraphon of a colored digraph.

        Diagonal cells get the uniform distribution unless ``diagonal_color``
        is given, in which case they carry that color's indicator.
        """
        beta = np.array(L.indicator().beta)
        if diagonal_color is not None:
            if not 1 <= diagonal_color <= L.k:
                raise ValueError("diagonal_color out of range")
            idx = np.arange(L.n)
            beta[:, idx, idx] = 0.0
            beta[diagonal_color - 1, idx, idx] = 1.0
        return cls(beta)

    @classmethod
    def constant(cls, probs) -> "KDigraphon":
        p = np.asarray(probs, dtype=float)
        return cls(p[:, None, None] * np.ones((1, 1, 1)))

    @property
    def k(self) -> int:
        return self._layers.shape[0]

    @property
    def m(self) -> int:
        return self._layers.shape[1]

    @property
    def layers(self) -> np.ndarray:
        return self._layers

    @property
    def boundaries(self) -> np.ndarray:
        return self._boundaries

    @property
    def measures(self) -> np.ndarray:
        return np.diff(self._boundaries)

    @property
    def is_uniform(self) -> bool:
        return np.array_equal(self._boundaries, equal_boundaries(self.m))

    def layer(self, h: int) -> StepKernel:
        """Color-h layer (1-based) as a StepKernel."""
        return StepKernel(self._layers[h - 1], 1.0, self._boundaries)

    def low_sum(self, m: int) -> StepKernel:
        """U = sum of the layers of colors 1..m."""
        return StepKernel(self._layers[:m].sum(axis=0), 1.0 + SUM_TOL, self._boundaries)

    def refine(self, boundaries) -> "KDigraphon":
        b = np.asarray(boundaries, dtype=float)
        idx = _cell_index(self._boundaries, b)
        return KDigraphon(self._layers[:, idx][:, :, idx], b)

    def __eq__(self, other):
        return (isinstance(other, KDigraphon) and np.array_equal(self._layers, other._layers)
                and np.array_equal(self._boundaries, other._boundaries))

    __hash__ = None

    def __repr__(self):
        return f"KDigraphon(k={self.k}, m={self.m})"


def align_digraphons(A: KDigraphon, B: KDigraphon) -> tuple[KDigraphon, KDigraphon]:
    if np.array_equal(A.boundaries, B.boundaries):
        return A, B
    b = common_boundaries(A.boundaries, B.boundaries)
    return A.refine(b), B.refine(b)


def kernel_of_graph(G: SimpleGraph) -> StepKernel:
    """W_G: the 0/1 adjacency matrix as a step function on S_n."""
    if G.n < 1:
        raise ValueError("graph must have at least one node")
    return StepKernel(G.adjacency.astype(float), 1.0)


def digraphon_of_fractional(H: FractionalColoring) -> KDigraphon:
    """W_H: layer h on cell (i, j) is beta^h(i, j), diagonal included as stored."""
    return KDigraphon(H.beta)


def _block_reduce(values: np.ndarray, weights: np.ndarray, starts: np.ndarray):
    """Weighted block sums and min/max over contiguous index blocks on the last two axes."""
    ww = np.outer(weights, weights)
    sums = np.add.reduceat(np.add.reduceat(values * ww, starts, axis=-2), starts, axis=-1)
    lo = np.minimum.reduceat(np.minimum.reduceat(values, starts, axis=-2), starts, axis=-1)
    hi = np.maximum.reduceat(np.maximum.reduceat(values, starts, axis=-2), starts, axis=-1)
    lam = np.add.reduceat(weights, starts)
    return sums / np.outer(lam, lam), lo, hi


def _refinement_blocks(src_boundaries, J: PartitionSpec):
    R = common_boundaries(src_boundaries, J.boundaries)
    cls = _cell_index(J.boundaries, R)
    starts = np.flatnonzero(np.r_[True, np.diff(cls) != 0])
    if starts.size != J.q:
        raise ValueError("partition has a class of measure zero at this resolution")
    return R, cls, starts


def block_means(values: np.ndarray, boundaries: np.ndarray, J: PartitionSpec) -> np.ndarray:
    """Average of a step grid (or a stack of grids) over every rectangle of J.

    Blocks on which the function is constant return that constant exactly.
    """
    R, _, starts = _refinement_blocks(boundaries, J)
    idx = _cell_index(boundaries, R)
    v = values[..., idx, :][..., :, idx]
    mean, lo, hi = _block_reduce(v, np.diff(R), starts)
    return np.where(lo == hi, lo, mean)


def average(W: StepKernel, J: PartitionSpec) -> StepKernel:
    """W_J: W averaged over every rectangle of J, on the common refinement of W and J."""
    R, cls, _ = _refinement_blocks(W.boundaries, J)
    means = block_means(W.values, W.boundaries, J)
    return StepKernel(means[np.ix_(cls, cls)], W.bound, R)


def symmetrize_check(W: StepKernel) -> float:
    """max |W(i,j) - W(j,i)| over cells."""
    return float(np.abs(W.values - W.values.T).max())


def pullback_coloring(F: SimpleGraph, Wd: KDigraphon, m: int, eps: float = DEGENERATE_EPS,
                      return_fallback: bool = False):
    """Fractional coloring of F that follows the colors of Wd (pullback of a certificate).

    Cell (i, j) uses the S_n block means of the layers: edges of F split their
    mass over colors 1..m in proportion W^h / U, non-edges over colors m+1..k
    in proportion W^h / (1 - U), where U is the sum of layers 1..m. When the
    relevant denominator is below ``eps`` the mass is split uniformly instead;
    ``return_fallback=True`` also returns how many off-diagonal cells did so.
    """
    k = Wd.k
    if not 1 <= m < k:
        raise ValueError(f"need 1 <= m < k, got m={m}, k={k}")
    asym = symmetrize_check(Wd.low_sum(m))
    if asym > SUM_TOL:
        raise ValueError(f"sum of layers 1..m is not symmetric (max asymmetry {asym:.3g})")
    n = F.n
    means = block_means(Wd.layers, Wd.boundaries, PartitionSpec.equal(n))
    U = means[:m].sum(axis=0)
    A = F.adjacency
    low_ok = U >= eps
    high_ok = (1.0 - U) >= eps
    beta = np.zeros((k, n, n))
    with np.errstate(divide="ignore", invalid="ignore"):
        beta[:m] = np.where(A & low_ok, means[:m] / U, 0.0)
        beta[m:] = np.where(~A & high_ok, means[m:] / (1.0 - U), 0.0)
    low_fb = A & ~low_ok
    high_fb = ~A & ~high_ok
    beta[:m][:, low_fb] = 1.0 / m
    beta[m:][:, high_fb] = 1.0 / (k - m)
    s = beta.sum(axis=0)
    drift = float(np.abs(s - 1.0).max())
    if drift > SUM_TOL:
        raise ValueError(f"pullback weights drift from 1 by {drift:.3g}")
    H = FractionalColoring(beta / s)
    if return_fallback:
        off = ~np.eye(n, dtype=bool)
        return H, int(((low_fb | high_fb) & off).sum())
    return H


def _gauss_cell_means(func, boundaries, nodes):
    x, w = np.polynomial.legendre.leggauss(nodes)
    a, b = boundaries[:-1], boundaries[1:]
    pts = (a[:, None] + b[:, None]) / 2 + (b - a)[:, None] / 2 * x[None, :]
    P = pts.ravel()
    vals = np.asarray(func(P[:, None], P[None, :]), dtype=float)
    vals = np.broadcast_to(vals, (P.size, P.size))
    m = a.size
    vals = vals.reshape(m, nodes, m, nodes)
    return np.einsum("injb,n,b->ij", vals, w, w) / 4.0


def discretize(func: Callable, resolution: int, nodes: int = 8, bound: float | None = None) -> StepKernel:
    """Cell means of ``func(x, y)`` on S_resolution by tensor Gauss-Legendre quadrature.

    Exact for polynomials of degree < 2 * nodes in each variable; ``func``
    must accept broadcasting arrays.
    """
    vals = _gauss_cell_means(func, equal_boundaries(resolution), nodes)
    return StepKernel(vals, bound)


ANALYTIC_KERNELS: dict[str, Callable] = {
    "product": lambda x, y: x * y,
    "min": np.minimum,
    "threshold": lambda x, y: (x + y >= 1.0).astype(float),
    "constant": lambda x, y: np.full(np.broadcast(x, y).shape, 0.5),
}


def analytic_kernel(name: str, resolution: int) -> StepKernel:
    """Registry kernel ``name`` discretized at ``resolution`` steps."""
    try:
        func = ANALYTIC_KERNELS[name]
    except KeyError:
        raise ValueError(f"unknown kernel id {name!r}; known: {sorted(ANALYTIC_KERNELS)}") from None
    return discretize(func, resolution, bound=1.0)


def random_digraphon(k: int, m_steps: int, rng, low_m: int = 1, u_range=(0.2, 0.8)) -> KDigraphon:
    """Random step k-digraphon whose low sum U (colors 1..low_m) is symmetric with values in u_range.

    Mass U is split over the low colors and 1 - U over the others by
    independent (asymmetric) Dirichlet draws.
    """
    if not 1 <= low_m < k:
        raise ValueError("need 1 <= low_m < k")
    U = rng.uniform(*u_range, size=(m_steps, m_steps))
    U = np.triu(U) + np.triu(U, 1).T
    layers = np.empty((k, m_steps, m_steps))
    layers[:low_m] = U * np.moveaxis(rng.dirichlet(np.ones(low_m), size=(m_steps, m_steps)), -1, 0)
    layers[low_m:] = (1 - U) * np.moveaxis(rng.dirichlet(np.ones(k - low_m), size=(m_steps, m_steps)), -1, 0)
    return KDigraphon(layers)
