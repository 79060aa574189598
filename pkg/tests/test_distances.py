import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from graphonlab.distances import (cut_distance_digraphons, cut_distance_fractional,
                                  cut_distance_graphs_labeled, cut_norm, delta_cut_upper,
                                  distance_to_property, edit_distance_colored,
                                  edit_distance_digraphons, edit_distance_graphs,
                                  edit_distance_kernels, graph_kernel_difference,
                                  max_bilinear_exact, max_bilinear_heuristic)
from graphonlab.graphs import KColoredDigraph, SimpleGraph
from graphonlab.kernels import (KDigraphon, StepKernel, digraphon_of_fractional, kernel_of_graph,
                                random_digraphon)
from graphonlab.properties import PropertySpec, d1_by_search
from graphonlab.sampling import (erdos_renyi, random_colored, random_fractional,
                                 sample_graph_from_graphon)
from oracles import cut_norm_naive, graph_cut_distance_naive


@st.composite
def small_graph_pairs(draw, max_n=5):
    n = draw(st.integers(1, max_n))
    out = []
    for _ in range(2):
        bits = draw(st.lists(st.booleans(), min_size=n * n, max_size=n * n))
        A = np.triu(np.array(bits, bool).reshape(n, n), 1)
        out.append(SimpleGraph(A | A.T))
    return out


# -- cut norm ------------------------------------------------------------------------

def test_cut_norm_examples():
    assert cut_norm(StepKernel(np.zeros((3, 3)))).value == 0
    r = cut_norm(StepKernel([[1.0, -1.0], [-1.0, 1.0]]))
    assert r.value == 0.25 and r.exact
    assert r.evaluate(np.array([[1, -1], [-1, 1]]) / 4) == 0.25


@given(st.integers(1, 6).flatmap(lambda m: st.tuples(
    st.just(m), st.lists(st.floats(-1, 1, allow_nan=False), min_size=m * m, max_size=m * m))))
def test_exact_matches_double_enumeration(args):
    m, vals = args
    v = np.array(vals).reshape(m, m)
    assert abs(cut_norm(StepKernel(v)).value - cut_norm_naive(v)) <= 1e-12


def test_non_uniform_steps_against_oracle():
    g = np.random.default_rng(0)
    b = np.array([0, 0.1, 0.35, 0.4, 0.8, 1.0])
    v = g.normal(size=(5, 5))
    W = StepKernel(v, boundaries=b)
    assert abs(cut_norm(W).value - cut_norm_naive(v, np.diff(b))) <= 1e-12


def test_witness_reproduces_value():
    g = np.random.default_rng(1)
    for _ in range(30):
        M = g.normal(size=(7, 7))
        for res in (max_bilinear_exact(M), max_bilinear_heuristic(M, rng=g)):
            assert abs(res.evaluate(M) - res.value) <= 1e-12


def test_heuristic_is_lower_bound_and_usually_tight():
    g = np.random.default_rng(2)
    equal = 0
    for _ in range(200):
        m = int(g.integers(2, 13))
        W = StepKernel(g.uniform(-1, 1, (m, m)))
        ex = cut_norm(W, mode="exact").value
        he = cut_norm(W, mode="heuristic", rng=g)
        assert he.value <= ex + 1e-12 and not he.exact
        equal += abs(he.value - ex) <= 1e-12
    assert equal >= 190


def test_exact_size_guard():
    with pytest.raises(ValueError):
        cut_norm(StepKernel(np.zeros((25, 25))), mode="exact")


@given(st.integers(1, 7).flatmap(lambda m: st.lists(st.floats(-1, 1, allow_nan=False), min_size=m * m,
                                                     max_size=m * m).map(lambda v: np.array(v).reshape(m, m))))
def test_cut_norm_below_l1_below_bound(v):
    W = StepKernel(v)
    assert cut_norm(W).value <= W.l1_norm() + 1e-12 <= W.bound + 2e-12


# -- graphs --------------------------------------------------------------------------

def test_graph_distance_examples():
    K2, E2 = SimpleGraph.complete(2), SimpleGraph.empty(2)
    # bilinear convention: S = T = V counts the edge in both directions
    r = cut_distance_graphs_labeled(K2, E2)
    assert r.value == 0.5 and r.S == r.T == (0, 1)
    D = K2.adjacency.astype(float) - E2.adjacency
    assert D[np.ix_([0], [1])].sum() / 4 == 0.25
    G = SimpleGraph.cycle(5)
    assert cut_distance_graphs_labeled(G, G).value == 0
    with pytest.raises(ValueError):
        cut_distance_graphs_labeled(G, SimpleGraph.empty(4))


@given(small_graph_pairs())
def test_graph_distance_matches_edge_count_oracle(pair):
    G, H = pair
    got = cut_distance_graphs_labeled(G, H).value
    assert abs(got - graph_cut_distance_naive(G.adjacency.tolist(), H.adjacency.tolist())) <= 1e-12
    assert abs(got - cut_norm(graph_kernel_difference(G, H)).value) <= 1e-12
    assert got == cut_distance_graphs_labeled(H, G).value
    assert got <= 2 * edit_distance_graphs(G, H) + 1e-12


def test_kernel_l1_dominates_dcut_random_pairs():
    g = np.random.default_rng(3)
    for _ in range(100):
        n = int(g.integers(2, 17))
        G, H = erdos_renyi(n, 0.5, g), erdos_renyi(n, 0.5, g)
        d1 = edit_distance_graphs(G, H)
        assert d1 == pytest.approx(graph_kernel_difference(G, H).l1_norm() / 2, abs=1e-15)
        assert cut_distance_graphs_labeled(G, H).value <= 2 * d1 + 1e-12


def test_edit_distance_examples():
    tri = SimpleGraph.complete(3)
    path = SimpleGraph.from_edges(3, [(0, 1), (1, 2)])
    assert edit_distance_graphs(tri, path) == 1 / 9
    g = np.random.default_rng(4)
    L = random_colored(10, 3, g)
    cols = np.array(L.colors)
    cols[2, 5] = cols[2, 5] % 3 + 1
    L2 = KColoredDigraph(cols, 3)
    assert edit_distance_colored(L, L) == 0 and edit_distance_colored(L, L2) == 0.01
    p = g.permutation(10)
    assert edit_distance_colored(L.relabel(p), L2.relabel(p)) == 0.01


# -- digraphons and fractional colorings --------------------------------------------

def test_constant_digraphons():
    a, b = KDigraphon.constant([0.3, 0.7]), KDigraphon.constant([0.55, 0.45])
    assert cut_distance_digraphons(a, b).value == pytest.approx(0.5, abs=1e-15)
    assert edit_distance_digraphons(a, b) == pytest.approx(0.5, abs=1e-15)
    assert cut_distance_digraphons(a, a).value == 0
    with pytest.raises(ValueError):
        cut_distance_digraphons(a, KDigraphon.constant([0.2, 0.3, 0.5]))


def test_fractional_one_pair_differs():
    n = 6
    L = KColoredDigraph.constant(n, 2, 1)
    cols = np.array(L.colors)
    cols[1, 4] = 2
    d = cut_distance_fractional(L.indicator(), KColoredDigraph(cols, 2).indicator())
    assert d.value == pytest.approx(2 / n**2, abs=1e-15)
    assert cut_distance_fractional(L.indicator(), L.indicator()).value == 0


def test_fractional_equals_digraphon_distance():
    g = np.random.default_rng(5)
    for _ in range(30):
        n, k = int(g.integers(2, 11)), int(g.integers(1, 4))
        H, H2 = random_fractional(n, k, g), random_fractional(n, k, g)
        a = cut_distance_fractional(H, H2).value
        b = cut_distance_digraphons(digraphon_of_fractional(H), digraphon_of_fractional(H2)).value
        assert abs(a - b) <= 1e-12


def test_digraphon_edit_dominates_cut():
    g = np.random.default_rng(6)
    for _ in range(30):
        a, b = random_digraphon(3, int(g.integers(1, 6)), g), random_digraphon(3, int(g.integers(1, 6)), g)
        assert cut_distance_digraphons(a, b).value <= edit_distance_digraphons(a, b) + 1e-12


# -- unlabeled distance ------------------------------------------------------------------

def test_delta_examples():
    C5 = SimpleGraph.cycle(5)
    p = np.random.default_rng(7).permutation(5)
    assert delta_cut_upper(C5, C5).value == 0
    assert delta_cut_upper(C5, C5.relabel(p)).value == 0
    assert delta_cut_upper(SimpleGraph.complete_bipartite(3, 3), SimpleGraph.complete(6)).value > 0.1
    with pytest.raises(ValueError):
        delta_cut_upper(SimpleGraph.empty(9), SimpleGraph.empty(9))


def test_delta_matches_brute_force_over_bijections():
    g = np.random.default_rng(8)
    for _ in range(5):
        G, H = erdos_renyi(5, 0.5, g), erdos_renyi(5, 0.5, g)
        want = min(graph_cut_distance_naive(G.adjacency.tolist(), H.relabel(list(p)).adjacency.tolist())
                   for p in itertools.permutations(range(5)))
        assert abs(delta_cut_upper(G, H).value - want) <= 1e-12


def test_delta_below_labeled():
    g = np.random.default_rng(9)
    for _ in range(10):
        G, H = erdos_renyi(6, 0.4, g), erdos_renyi(6, 0.6, g)
        assert delta_cut_upper(G, H).value <= cut_distance_graphs_labeled(G, H).value + 1e-12


def test_align_heuristic_unequal_sizes():
    r = delta_cut_upper(SimpleGraph.complete_bipartite(2, 2), SimpleGraph.complete_bipartite(3, 3),
                        mode="align-heuristic", rng=np.random.default_rng(0))
    assert r.value == 0 and r.exact


# -- distance to a property ------------------------------------------------------------

def test_distance_to_property_examples():
    C5 = SimpleGraph.cycle(5)
    assert distance_to_property(C5, PropertySpec.parse("maxcut:c=0.16")).value == 0
    assert distance_to_property(SimpleGraph.empty(10), PropertySpec.parse("maxcut:c=0.2")).value == 0.2
    assert distance_to_property(SimpleGraph.complete(4), PropertySpec.make("complete")).value == 0
    d = distance_to_property(SimpleGraph.complete_bipartite(3, 3), PropertySpec.parse("maxcut:c=0.2"), metric="delta")
    assert d.value == 0 and not d.exact


@pytest.mark.parametrize("prop", ["maxcut:c=0.2", "maxcut:c=0.3", "bisection:c=0.2",
                                  "density:a=0.3,b=0.5", "density:a=0,b=0.1"])
def test_closed_form_d1_matches_edit_search(prop):
    P = PropertySpec.parse(prop)
    g = np.random.default_rng(10)
    for _ in range(12):
        n = int(g.integers(2, 7))
        G = erdos_renyi(n, float(g.random()), g)
        assert distance_to_property(G, P).value == d1_by_search(G, P).value


# -- metric axioms ---------------------------------------------------------------------

def _triples(make, count=100, seed=11):
    g = np.random.default_rng(seed)
    return [tuple(make(g) for _ in range(3)) for _ in range(count)]


def _check_metric(dist, triples):
    for a, b, c in triples:
        ab, ba, bc, ac = dist(a, b), dist(b, a), dist(b, c), dist(a, c)
        assert ab >= 0 and abs(ab - ba) <= 1e-12
        assert ac <= ab + bc + 1e-12


def test_metric_axioms_graphs():
    t = _triples(lambda g: erdos_renyi(8, 0.5, g))
    _check_metric(lambda a, b: cut_distance_graphs_labeled(a, b).value, t)
    _check_metric(edit_distance_graphs, t)


def test_metric_axioms_colored_and_fractional():
    _check_metric(edit_distance_colored, _triples(lambda g: random_colored(8, 3, g)))
    _check_metric(lambda a, b: cut_distance_fractional(a, b).value, _triples(lambda g: random_fractional(6, 3, g)))


def test_metric_axioms_digraphons_and_kernels():
    t = _triples(lambda g: random_digraphon(3, int(g.integers(1, 5)), g))
    _check_metric(lambda a, b: cut_distance_digraphons(a, b).value, t)
    _check_metric(edit_distance_digraphons, t)
    k = _triples(lambda g: StepKernel(g.uniform(-1, 1, (3, 3))))
    _check_metric(edit_distance_kernels, k)
    _check_metric(lambda a, b: cut_norm(a - b).value, k)


# -- product continuity surrogate ---------------------------------------------------------

def test_cut_norm_of_products_shrinks_with_samples():
    g = np.random.default_rng(12)
    U = g.uniform(0.2, 0.8, (4, 4))
    U = StepKernel(np.triu(U) + np.triu(U, 1).T)
    Z = StepKernel(g.uniform(-1, 1, (4, 4)))
    zmax = np.abs(Z.values).max()
    prods = []
    for n in (16, 32, 64, 128):
        W = kernel_of_graph(sample_graph_from_graphon(U, n, g, sort_positions=True)) - U
        mode = "exact" if W.m <= 24 else "heuristic"
        a = cut_norm(W, mode=mode, rng=g).value
        b = cut_norm(W * Z, mode=mode, rng=g).value
        assert b <= 2 * a * zmax + 1e-12
        prods.append(b)
    assert prods[-1] < prods[0]
