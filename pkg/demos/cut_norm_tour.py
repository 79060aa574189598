"""Cut norms and cut distances on small graphs and step kernels."""
import numpy as np

from graphonlab.distances import (cut_distance_graphs_labeled, cut_norm, delta_cut_upper,
                                  edit_distance_graphs)
from graphonlab.graphs import SimpleGraph
from graphonlab.kernels import StepKernel

# A checkerboard kernel: positive on the diagonal blocks, negative off it.
W = StepKernel([[1, -1], [-1, 1]])
exact = cut_norm(W)
print(f"checkerboard: cut norm {exact.value} (exact={exact.exact}), S={exact.S}, T={exact.T}")
print(f"heuristic agrees: {cut_norm(W, mode='heuristic', rng=0).value}")

# Labeled distance sees labels; the relabeling-invariant bound does not.
C5 = SimpleGraph.cycle(5)
C5b = C5.relabel([2, 0, 4, 1, 3])
print(f"C5 vs relabeled C5: labeled d_cut {cut_distance_graphs_labeled(C5, C5b).value:.4f}, "
      f"d1 {edit_distance_graphs(C5, C5b):.4f}, delta upper {delta_cut_upper(C5, C5b).value:.4f}")

# Random kernel with uneven steps.
g = np.random.default_rng(3)
R = StepKernel(g.uniform(-1, 1, (6, 6)), boundaries=[0, 0.1, 0.3, 0.35, 0.6, 0.9, 1])
print(f"random 6-step kernel: cut norm {cut_norm(R).value:.6f}, l1 {R.l1_norm():.6f}")
