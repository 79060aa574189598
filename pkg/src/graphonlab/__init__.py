"""Dense-graph limits and property testing at desk scale.

Step-function graphons and k-digraphons, samplers, cut and edit distances,
the certificate pullback-and-rounding construction, and max-cut style testers.
"""
from .graphs import (FractionalColoring, KColoredDigraph, SimpleGraph, is_consistent_coloring,
                     shadow)
from .io import load_graph, save_graph
from .kernels import (KDigraphon, PartitionSpec, StepKernel, average, digraphon_of_fractional,
                      kernel_of_graph, pullback_coloring, symmetrize_check)
from .properties import PropertySpec, brute_force_certificate
from .sampling import (RngSpec, generate, round_coloring, sample_from_digraphon,
                       sample_graph_from_graphon, sample_induced, sample_induced_colored)
from .distances import (cut_distance_digraphons, cut_distance_fractional,
                        cut_distance_graphs_labeled, cut_norm, delta_cut_upper,
                        distance_to_property, edit_distance_colored, edit_distance_digraphons,
                        edit_distance_graphs)
from .testers import (TesterSpec, acceptance_probability, certified_parameter, estimate_parameter,
                      maxcut_density, nd_membership, tester_for_maxcut)

__version__ = "0.1.0"
