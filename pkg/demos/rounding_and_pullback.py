"""Round a fractional coloring, then pull a 3-digraphon back onto sampled graphs."""
import numpy as np

from graphonlab.distances import cut_distance_digraphons, cut_distance_fractional
from graphonlab.graphs import shadow
from graphonlab.kernels import digraphon_of_fractional, pullback_coloring, random_digraphon
from graphonlab.sampling import RngSpec, random_fractional, round_coloring, sample_graph_from_graphon

k = 3
for n in (50, 200):
    g = RngSpec(11).child(n).generator()
    H = random_fractional(n, k, g)
    L = round_coloring(H, g)
    d = cut_distance_fractional(H, L.indicator())
    print(f"n={n}: d_cut(H, rounded) = {d.value:.4f} (bound 10k/sqrt(n) = {10 * k / np.sqrt(n):.2f}, exact={d.exact})")

W = random_digraphon(k, 4, np.random.default_rng(7))
U = W.low_sum(1)
print("\nn   shadow kept   d_cut(W_H, W)")
for n in (16, 32, 64):
    g = RngSpec(5).child(n).generator()
    F = sample_graph_from_graphon(U, n, g, sort_positions=True)
    H = pullback_coloring(F, W, 1)
    kept = shadow(round_coloring(H, g), 1) == F
    print(f"{n:<4}{str(kept):<14}{cut_distance_digraphons(digraphon_of_fractional(H), W).value:.4f}")
