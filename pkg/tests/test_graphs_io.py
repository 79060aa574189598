import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from graphonlab import io as gio
from graphonlab.graphs import (FractionalColoring, KColoredDigraph, SimpleGraph, all_graphs,
                               is_consistent_coloring, shadow)
from graphonlab.kernels import KDigraphon, StepKernel
from graphonlab.properties import PropertySpec, brute_force_certificate
from oracles import shadow_naive


@st.composite
def graphs(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    bits = draw(st.lists(st.booleans(), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))
    adj = np.zeros((n, n), bool)
    adj[np.triu_indices(n, 1)] = bits
    return SimpleGraph(adj | adj.T)


@st.composite
def colored(draw, max_n=6, max_k=4):
    n = draw(st.integers(2, max_n))
    k = draw(st.integers(1, max_k))
    cols = np.array(draw(st.lists(st.integers(1, k), min_size=n * n, max_size=n * n))).reshape(n, n)
    np.fill_diagonal(cols, 0)
    return KColoredDigraph(cols, k)


# -- parsing -------------------------------------------------------------------------

def test_load_triangle(tmp_path):
    p = tmp_path / "k3.g"
    p.write_text("3 3\n1 2\n2 3\n1 3\n")
    assert gio.load_graph(p) == SimpleGraph.complete(3)


def test_load_isolated_nodes():
    G = gio.parse_graph("# two isolated nodes\n2 0\n")
    assert G.n == 2 and G.num_edges == 0


@pytest.mark.parametrize("text, line", [
    ("2 1\n1 1\n", 2),
    ("3 2\n1 2\n2 1\n", 3),
    ("3 1\n1 4\n", 2),
    ("3 2\n1 2\n", None),
    ("3 1\n1 x\n", 2),
])
def test_graph_parse_errors(text, line):
    with pytest.raises(gio.FormatError) as exc:
        gio.parse_graph(text)
    if line is not None:
        assert exc.value.line == line


def test_loop_message_mentions_loop():
    with pytest.raises(gio.FormatError, match="loop"):
        gio.parse_graph("2 1\n1 1\n")


def test_fractional_rejects_bad_sums():
    with pytest.raises(ValueError):
        gio.parse_fractional("2 2\n0 0.5\n0.5 0\n0 0.4\n0.4 0\n")


@given(graphs())
def test_graph_roundtrip(G):
    assert gio.parse_graph(gio.format_graph(G)) == G


@given(colored())
def test_colored_roundtrip(L):
    assert gio.parse_colored(gio.format_colored(L)) == L


def test_float_roundtrip_bit_exact(tmp_path):
    g = np.random.default_rng(3)
    beta = g.dirichlet(np.ones(3), size=(5, 5)).transpose(2, 0, 1)
    H = FractionalColoring(beta)
    gio.save_fractional(H, tmp_path / "h.txt")
    assert np.array_equal(gio.load_fractional(tmp_path / "h.txt").beta, H.beta)
    W = StepKernel(g.normal(size=(4, 4)), boundaries=[0, 0.1, 0.5, 0.7, 1.0])
    gio.save_kernel(W, tmp_path / "w.txt")
    W2 = gio.load_kernel(tmp_path / "w.txt")
    assert np.array_equal(W2.values, W.values) and np.array_equal(W2.boundaries, W.boundaries)
    Wd = KDigraphon(beta)
    gio.save_digraphon(Wd, tmp_path / "d.txt")
    assert gio.load_digraphon(tmp_path / "d.txt") == Wd


# -- types ---------------------------------------------------------------------------

def test_graph_validation():
    with pytest.raises(ValueError):
        SimpleGraph([[0, 1], [0, 0]])
    with pytest.raises(ValueError):
        SimpleGraph([[1, 0], [0, 0]])
    with pytest.raises(ValueError):
        SimpleGraph.from_edges(3, [(0, 1), (1, 0)])
    with pytest.raises(ValueError):
        KColoredDigraph([[0, 3], [1, 0]], 2)


def test_graph_is_immutable():
    G = SimpleGraph.cycle(4)
    with pytest.raises(ValueError):
        G.adjacency[0, 1] = False


def test_fractional_diagonal_default_uniform():
    beta = np.zeros((2, 2, 2))
    beta[0, 0, 1] = beta[1, 1, 0] = 1.0
    H = FractionalColoring(beta)
    assert H.beta[:, 0, 0].tolist() == [0.5, 0.5]


def test_edge_density():
    assert SimpleGraph.complete(4).edge_density() == 12 / 16


# -- shadow --------------------------------------------------------------------------

def test_shadow_examples():
    assert shadow(KColoredDigraph.constant(4, 2, 2), 1) == SimpleGraph.empty(4)
    assert shadow(KColoredDigraph.constant(4, 2, 1), 1) == SimpleGraph.complete(4)
    cols = np.full((3, 3), 2)
    np.fill_diagonal(cols, 0)
    cols[0, 1] = 1
    L = KColoredDigraph(cols, 2)
    assert shadow(L, 1) == SimpleGraph.from_edges(3, [(0, 1)])
    assert not is_consistent_coloring(L, 1)
    assert is_consistent_coloring(KColoredDigraph.constant(3, 3, 1), 2)


def test_shadow_m_out_of_range():
    with pytest.raises(ValueError):
        shadow(KColoredDigraph.constant(3, 2, 1), 3)


@given(colored(), st.data())
def test_shadow_matches_oracle(L, data):
    m = data.draw(st.integers(1, L.k))
    assert set(shadow(L, m).edges) == shadow_naive(L.colors.tolist(), m)
    assert shadow(L, L.k) == SimpleGraph.complete(L.n)


@given(colored(max_k=4), st.data())
def test_shadow_invariant_under_color_permutations(L, data):
    m = data.draw(st.integers(1, L.k))
    low = data.draw(st.permutations(range(1, m + 1)))
    high = data.draw(st.permutations(range(m + 1, L.k + 1)))
    table = np.array([0] + list(low) + list(high))
    assert shadow(KColoredDigraph(table[L.colors], L.k), m) == shadow(L, m)


@given(colored(), st.data())
def test_consistent_shadow_is_directional(L, data):
    m = data.draw(st.integers(1, L.k))
    if is_consistent_coloring(L, m):
        S = shadow(L, m).adjacency
        off = ~np.eye(L.n, dtype=bool)
        assert np.array_equal(S[off], (L.colors <= m)[off])


@given(colored(), st.data())
def test_relabel_commutes_with_shadow(L, data):
    order = np.array(data.draw(st.permutations(range(L.n))))
    m = data.draw(st.integers(1, L.k))
    assert shadow(L.relabel(order), m) == shadow(L, m).relabel(order)


def test_all_graphs_counts():
    assert [sum(1 for _ in all_graphs(n)) for n in range(1, 5)] == [1, 2, 8, 64]


# -- certificates --------------------------------------------------------------------

def test_certificate_examples():
    mono = PropertySpec.make("monochrome", h=1)
    L = brute_force_certificate(SimpleGraph.complete(3), mono, 2, 1)
    assert L == KColoredDigraph.constant(3, 2, 1)
    assert brute_force_certificate(SimpleGraph.empty(3), mono, 2, 1) is None
    cert = brute_force_certificate(SimpleGraph.cycle(5), PropertySpec.parse("bipartite-color-1:t=4"), 2, 1)
    assert cert is not None and shadow(cert, 1) == SimpleGraph.cycle(5)


def test_certificate_is_lexicographically_first():
    G = SimpleGraph.from_edges(3, [(0, 1)])
    L = brute_force_certificate(G, PropertySpec.make("any"), 2, 1)
    # first pair (0,1) gets the smallest color, then (0,2) must be a non-edge color
    assert L.colors.tolist() == [[0, 1, 2], [1, 0, 2], [2, 2, 0]]


def test_certificate_prune_does_not_change_answer():
    Q = PropertySpec.parse("color1-cut:t=6")
    for G in list(all_graphs(4))[::5]:
        a = brute_force_certificate(G, Q, 2, 1, prune=True)
        b = brute_force_certificate(G, Q, 2, 1, prune=False)
        assert a == b


def test_certificate_size_guard():
    with pytest.raises(ValueError):
        brute_force_certificate(SimpleGraph.empty(8), PropertySpec.make("any"), 2, 1)
