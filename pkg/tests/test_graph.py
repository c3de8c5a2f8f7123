import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alphacf import (
    Graph,
    ParameterError,
    ParseError,
    bfs_distances,
    compute_stats,
    connected_components,
    generate_barabasi_albert,
    generate_erdos_renyi,
    generate_watts_strogatz,
    load_edge_list,
)
from alphacf.graph import format_edge_list, local_clustering, parse_generator_spec

from .conftest import complete_graph, cycle_graph, path_graph


edge_lists = st.lists(st.tuples(st.integers(0, 14), st.integers(0, 14)), max_size=60)


def test_load_simple():
    g, labels, _ = load_edge_list("1 2\n2 3")
    assert (g.n, g.m) == (3, 2)
    assert labels.to_label(labels.to_id("3")) == "3"


def test_load_drops_duplicates_and_loops():
    g, _, rep = load_edge_list("1 2\n2 1\n1 1")
    assert (g.n, g.m) == (2, 1)
    assert (rep.duplicates, rep.self_loops) == (1, 1)


def test_load_skips_comments():
    g, _, _ = load_edge_list("# header\n% other\n\na b\n")
    assert g.m == 1


def test_load_malformed_line_reports_line_number():
    with pytest.raises(ParseError) as exc:
        load_edge_list("1 2\n1 2 3\n")
    assert exc.value.line == 2


@pytest.mark.parametrize("text", ["", "# only a comment\n", "\n\n"])
def test_load_empty(text):
    with pytest.raises(ParseError):
        load_edge_list(text)


@settings(max_examples=60, deadline=None)
@given(edge_lists)
def test_graph_invariants(pairs):
    g = Graph.from_edges(15, pairs)
    assert g.degrees.sum() == 2 * g.m
    assert np.all(g.edges[:, 0] < g.edges[:, 1])
    assert len(np.unique(g.edges, axis=0)) == g.m
    for v in range(g.n):
        nb = g.neighbors(v)
        assert np.all(np.diff(nb) > 0)
        for w in nb:
            assert v in g.neighbors(w)
            e = g.edge_index(v, w)
            assert set(g.edges[e]) == {v, w}


@settings(max_examples=40, deadline=None)
@given(edge_lists)
def test_serialisation_round_trip(pairs):
    g = Graph.from_edges(15, pairs)
    h, labels, _ = load_edge_list(format_edge_list(g))
    assert h.n == g.n
    assert np.array_equal(h.edges, g.edges)
    assert labels.to_id("7") == 7


def test_graph_is_immutable():
    g = path_graph(3)
    with pytest.raises(ValueError):
        g.edges[0, 0] = 2
    with pytest.raises(AttributeError):
        g.n = 4


def test_induced_subgraph_leaves_parent_intact():
    g = cycle_graph(6)
    sub, ids = g.induced(np.array([True, True, True, False, True, True]))
    assert sub.n == 5 and sub.m == 4
    assert list(ids) == [0, 1, 2, 4, 5]
    assert g.m == 6


def test_watts_strogatz_table_size():
    g = generate_watts_strogatz(1000, 12, 0.15, seed=3)
    assert g.m == 6000
    assert 2 * g.m / g.n == 12.0


def test_watts_strogatz_ring_lattice():
    g = generate_watts_strogatz(6, 2, 0.0, seed=0)
    assert np.array_equal(g.edges, cycle_graph(6).edges)
    assert compute_stats(g).diameter == 3


def test_watts_strogatz_full_rewire():
    g = generate_watts_strogatz(50, 4, 1.0, seed=7)
    assert g.m == 100
    assert g.degrees.sum() == 200


@pytest.mark.parametrize("n,k", [(10, 3), (10, 10), (10, 0)])
def test_watts_strogatz_bad_params(n, k):
    with pytest.raises(ParameterError):
        generate_watts_strogatz(n, k, 0.1, seed=0)


def test_erdos_renyi_extremes():
    assert generate_erdos_renyi(10, 0.0, seed=1).m == 0
    assert generate_erdos_renyi(10, 1.0, seed=1).m == 45
    with pytest.raises(ParameterError):
        generate_erdos_renyi(10, 1.5, seed=1)


def test_barabasi_albert_connected():
    g = generate_barabasi_albert(100, 3, seed=1)
    assert g.degrees.sum() == 2 * g.m
    assert connected_components(g)[1].size == 1


@pytest.mark.parametrize("make", [
    lambda s: generate_watts_strogatz(60, 4, 0.3, s),
    lambda s: generate_erdos_renyi(60, 0.1, s),
    lambda s: generate_barabasi_albert(60, 2, s),
])
def test_generators_deterministic(make):
    assert np.array_equal(make(5).edges, make(5).edges)
    assert not np.array_equal(make(5).edges, make(6).edges)


def test_generator_spec():
    assert parse_generator_spec("ws:n=10,k=2,p=0.5") == ("ws", {"n": 10, "k": 2, "p": 0.5})
    with pytest.raises(ParameterError):
        parse_generator_spec("ws:n=10,k=2")
    with pytest.raises(ParameterError):
        parse_generator_spec("lattice:n=3")


def test_bfs_examples():
    assert list(bfs_distances(path_graph(3), 1)) == [1, 0, 1]
    two = Graph.from_edges(4, [(0, 1), (2, 3)])
    assert bfs_distances(two, 0)[2] == -1
    assert bfs_distances(cycle_graph(6), 0).max() == 3
    with pytest.raises(ParameterError):
        bfs_distances(two, 4)


@settings(max_examples=30, deadline=None)
@given(edge_lists)
def test_bfs_triangle_inequality(pairs):
    g = Graph.from_edges(15, pairs)
    d = np.array([bfs_distances(g, s) for s in range(g.n)])
    assert np.all(np.diag(d) == 0)
    assert np.array_equal(d, d.T)
    reach = d >= 0
    for k in range(g.n):
        via = np.where(reach[:, [k]] & reach[[k], :], d[:, [k]] + d[[k], :], np.iinfo(int).max)
        assert np.all(~reach | (d <= via))


def test_components():
    g = Graph.from_edges(5, [(0, 1), (2, 3), (3, 4), (2, 4)])
    labels, sizes = connected_components(g)
    assert list(sizes) == [3, 2]
    assert labels[2] == 0 and labels[0] == 1
    assert list(connected_components(cycle_graph(5))[1]) == [5]
    assert list(connected_components(Graph.from_edges(4, []))[1]) == [1, 1, 1, 1]


def test_stats_small_graphs():
    tri = compute_stats(complete_graph(3))
    assert tri.clustering == 1.0 and tri.diameter == 1
    p3 = compute_stats(path_graph(3))
    assert p3.clustering == 0.0
    assert p3.mean_distance == pytest.approx(4 / 3)
    with pytest.raises(ParameterError):
        compute_stats(Graph.from_edges(3, []))


def test_stats_against_networkx():
    g = generate_watts_strogatz(200, 6, 0.2, seed=4)
    st_ = compute_stats(g)
    h = g.to_networkx()
    assert st_.clustering == pytest.approx(nx.average_clustering(h))
    assert st_.diameter == nx.diameter(h)
    assert st_.mean_distance == pytest.approx(nx.average_shortest_path_length(h))
    assert st_.mean_degree == pytest.approx(2 * g.m / g.n)


def test_clustering_convention_includes_leaves_as_zero():
    # triangle with a pendant: nodes of degree 1 count as 0
    g = Graph.from_edges(4, [(0, 1), (1, 2), (0, 2), (2, 3)])
    cc = local_clustering(g)
    assert cc[3] == 0.0
    s = compute_stats(g)
    assert s.clustering == pytest.approx(np.mean(cc))
    assert s.clustering_nonleaf == pytest.approx(np.mean(cc[:3]))
