"""Graph construction, edge-list parsing, and rate configuration."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hetsis import Graph, InputError, RateConfig, format_edge_list, parse_edge_list, walk_counts

from conftest import brute_walk_counts, complete_graph, path_graph, random_connected_graph, star_graph


def test_from_edges_basic_shape():
    g = Graph.from_edges([(0, 1), (1, 2), (0, 2)])
    assert g.n == 3
    assert g.link_count == 3
    assert np.array_equal(g.degrees, [2, 2, 2])
    assert np.array_equal(g.adjacency, g.adjacency.T)
    assert np.all(np.diag(g.adjacency) == 0)
    assert set(map(tuple, g.edges())) == {(0, 1), (0, 2), (1, 2)}
    assert list(g.neighbors(1)) == [0, 2]


def test_from_edges_order_and_orientation_insensitive():
    a = Graph.from_edges([(0, 1), (1, 2)])
    b = Graph.from_edges([(2, 1), (1, 0)])
    assert np.array_equal(a.adjacency, b.adjacency)


@pytest.mark.parametrize(
    "edges,fragment",
    [
        ([(0, 0)], "self-loop"),
        ([(0, 1), (1, 0)], "duplicate"),
        ([(0, 1), (0, 1)], "duplicate"),
        ([(-1, 2)], "negative"),
        ([(0, 2)], "gap"),
        ([(0, 1), (2, 3)], "disconnected"),
        ([], "empty"),
    ],
)
def test_from_edges_rejects_malformed(edges, fragment):
    with pytest.raises(InputError, match=fragment):
        Graph.from_edges(edges)


def test_adjacency_is_immutable():
    g = path_graph(3)
    with pytest.raises(ValueError):
        g.adjacency[0, 1] = 5


def test_parse_edge_list_comments_and_blanks():
    text = "# triangle\n0 1\n\n1 2  # closing edge\n0 2\n"
    g = parse_edge_list(text)
    assert g.n == 3 and g.link_count == 3


def test_parse_edge_list_reports_line_numbers():
    with pytest.raises(InputError, match="line 2"):
        parse_edge_list("0 1\n1 two\n")
    with pytest.raises(InputError, match="line 3"):
        parse_edge_list("0 1\n1 2\n3\n")


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=2, max_value=12), st.integers(min_value=0, max_value=10**6))
def test_edge_list_round_trip(n, seed):
    g = random_connected_graph(n, np.random.default_rng(seed))
    again = parse_edge_list(format_edge_list(g))
    assert np.array_equal(g.adjacency, again.adjacency)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=2, max_value=20), st.integers(min_value=0, max_value=10**6))
def test_degree_sum_is_twice_links(n, seed):
    g = random_connected_graph(n, np.random.default_rng(seed))
    assert int(g.degrees.sum()) == 2 * g.link_count


@settings(max_examples=15, deadline=None)
@given(st.integers(min_value=2, max_value=7), st.integers(min_value=0, max_value=10**6))
def test_walk_counts_match_brute_force(n, seed):
    g = random_connected_graph(n, np.random.default_rng(seed), extra=0.3)
    total, closed = walk_counts(g)
    brute_total, brute_closed = brute_walk_counts(g)
    assert total == brute_total
    assert closed == brute_closed


def test_walk_counts_triangle():
    total, closed = walk_counts(complete_graph(3))
    assert total == 24.0
    assert closed == 6.0


def test_rate_config_scalar_broadcast():
    g = star_graph(4)
    r = RateConfig.for_graph(g, 2.0, 0.5)
    assert np.allclose(r.beta, 2.0)
    assert np.allclose(r.delta, 0.5)
    assert np.allclose(r.tau, 4.0)
    # gamma_i = sum_j a_ij beta_j: hub sees three leaves, leaves see the hub
    assert np.allclose(r.gamma, [6.0, 2.0, 2.0, 2.0])


def test_rate_config_vector_rates():
    g = path_graph(3)
    r = RateConfig.for_graph(g, [1.0, 2.0, 3.0], [2.0, 4.0, 6.0])
    assert np.allclose(r.tau, 0.5)
    assert np.allclose(r.gamma, [2.0, 4.0, 2.0])


@pytest.mark.parametrize("bad", [0.0, -1.0, np.nan, np.inf])
def test_rate_config_requires_positive_finite(bad):
    g = path_graph(3)
    with pytest.raises(InputError):
        RateConfig.for_graph(g, bad, 1.0)
    with pytest.raises(InputError):
        RateConfig.for_graph(g, 1.0, [1.0, bad, 1.0])


def test_rate_config_rejects_length_mismatch():
    g = path_graph(3)
    with pytest.raises(InputError, match="length"):
        RateConfig.for_graph(g, [1.0, 2.0], 1.0)


def test_rate_config_from_tau_sets_unit_curing():
    g = complete_graph(3)
    r = RateConfig.from_tau(g, 3.0)
    assert np.allclose(r.delta, 1.0)
    assert np.allclose(r.beta, 3.0)
    assert np.allclose(r.tau, 3.0)


def test_rate_config_from_json():
    g = path_graph(3)
    r = RateConfig.from_json(g, '{"beta": [1.0, 2.0, 1.0], "delta": 0.5}')
    assert np.allclose(r.beta, [1.0, 2.0, 1.0])
    assert np.allclose(r.delta, 0.5)
    with pytest.raises(InputError):
        RateConfig.from_json(g, '{"beta": [1.0, 2.0, 1.0]}')
    with pytest.raises(InputError):
        RateConfig.from_json(g, "not json")


def test_rate_config_arrays_immutable():
    g = path_graph(3)
    r = RateConfig.for_graph(g, 1.0, 1.0)
    with pytest.raises(ValueError):
        r.beta[0] = 9.0
