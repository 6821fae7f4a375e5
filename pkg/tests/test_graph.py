import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from friendlycuts.graph import (
    ContractionMap,
    Cut,
    Graph,
    GraphParseError,
    Sparsifier,
    contract,
    cut_value,
    degree,
    degrees,
    is_friendly,
    parse_graph,
    parse_node_subset,
    refine_to_connected,
    serialize_graph,
    serialize_node_subset,
    volume,
)


def small_graphs():
    edge = st.tuples(st.integers(0, 7), st.integers(0, 7), st.integers(1, 9))
    return st.builds(
        lambda n, raw: Graph.build(n, [(u, v, w) for u, v, w in raw if u != v and u < n and v < n]),
        st.integers(2, 8),
        st.lists(edge, max_size=20),
    )


def test_build_merges_parallel_edges():
    g = Graph.build(3, [(0, 1, 2), (1, 0, 3), (1, 2, 1)])
    assert g.edge_list() == [(0, 1, 5), (1, 2, 1)]
    assert g.total_weight == 6


def test_build_rejects_bad_edges():
    with pytest.raises(ValueError):
        Graph.build(2, [(0, 0, 1)])
    with pytest.raises(ValueError):
        Graph.build(2, [(0, 1, 0)])
    with pytest.raises(ValueError):
        Graph.build(2, [(0, 2, 1)])


def test_degrees_exclude_extra_volume():
    g = Graph.build(3, [(0, 1, 4)], extra_volume=[7, 0, 2])
    assert degree(g, 0) == 4
    assert volume(g, [0]) == 11
    assert volume(g, [2]) == 2


def test_cut_value_path():
    g = Graph.build(4, [(0, 1, 1), (1, 2, 5), (2, 3, 1)])
    assert cut_value(g, {0, 1}) == 5
    assert cut_value(g, {0}) == 1
    with pytest.raises(ValueError):
        cut_value(g, set())
    with pytest.raises(ValueError):
        cut_value(g, {0, 1, 2, 3})


def test_is_friendly_triangle_plus_pendant():
    # pendant node sends its whole degree across: unfriendly
    g = Graph.build(4, [(0, 1, 1), (1, 2, 1), (0, 2, 1), (2, 3, 1)])
    assert not is_friendly(g, {3})
    assert not is_friendly(g, {0, 1, 2})  # same cut, other side


def test_is_friendly_even_split():
    # C_4: opposite split, each node keeps 1 of 2 across -> 0.5 <= 0.6
    g = Graph.build(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, 1)])
    assert is_friendly(g, {0, 1})


def test_friendliness_threshold_is_strict():
    # every node sends exactly 3/5 of its degree across: still friendly
    g = Graph.build(4, [(0, 1, 2), (0, 2, 3), (1, 3, 3), (2, 3, 2)])
    assert is_friendly(g, {0, 1})
    # one extra crossing unit tips a node past 3/5
    g2 = Graph.build(4, [(0, 1, 2), (0, 2, 4), (1, 3, 3), (2, 3, 2)])
    assert not is_friendly(g2, {0, 1})


@given(small_graphs(), st.data())
@settings(max_examples=60, deadline=None)
def test_cut_value_symmetric(g, data):
    side = data.draw(st.sets(st.integers(0, g.n - 1), min_size=1, max_size=g.n - 1))
    other = set(range(g.n)) - side
    if not other:
        return
    assert cut_value(g, side) == cut_value(g, other)


@given(small_graphs())
@settings(max_examples=40, deadline=None)
def test_contract_identity_is_noop(g):
    assert contract(g, ContractionMap.identity(g.n)) == g


def test_contract_sums_weights_and_drops_loops():
    g = Graph.build(4, [(0, 1, 2), (0, 2, 1), (1, 2, 3), (2, 3, 1)])
    cmap = ContractionMap.from_classes(4, [{0, 1}])
    h = contract(g, cmap)
    assert h.n == 3
    # edge (0,1) became a self-loop and vanished; (0,2)+(1,2) merged
    assert h.edge_list() == [(0, 1, 4), (1, 2, 1)]


@given(small_graphs(), st.data())
@settings(max_examples=60, deadline=None)
def test_contract_preserves_noncrossing_cut_values(g, data):
    side = data.draw(st.sets(st.integers(0, g.n - 1), min_size=1, max_size=g.n - 1))
    if len(side) == g.n:
        return
    # contract a class inside the side: the cut value must be unchanged
    if len(side) < 2:
        return
    cmap = ContractionMap.from_classes(g.n, [side])
    h = contract(g, cmap)
    mapped = {int(cmap.super_of[v]) for v in side}
    assert len(mapped) == 1
    assert cut_value(h, mapped) == cut_value(g, side)


def test_contraction_map_compose():
    a = ContractionMap.from_classes(5, [{0, 1}])
    b = ContractionMap.from_classes(a.n_super, [{0, 1}])
    c = a.compose(b)
    assert c.n_super == 3
    assert int(c.super_of[0]) == int(c.super_of[2])


def test_refine_to_connected_splits_disconnected_class():
    g = Graph.build(4, [(0, 1, 1), (2, 3, 1)])
    cmap = ContractionMap.from_classes(4, [{0, 2}])
    refined = refine_to_connected(g, cmap)
    assert refined.n_super == 4


def test_parse_serialize_roundtrip():
    g = Graph.build(4, [(0, 1, 2), (2, 3, 1)])
    assert parse_graph(serialize_graph(g)) == g


def test_parse_accepts_comments_and_default_weight():
    text = "3 2\n# comment\n0 1\n\n1 2 4\n"
    g = parse_graph(text)
    assert g.edge_list() == [(0, 1, 1), (1, 2, 4)]


def test_parse_reports_line_numbers():
    with pytest.raises(GraphParseError) as exc:
        parse_graph("3 1\n0 1 1\n0 2 x\n")
    assert "line 3" in str(exc.value)


def test_node_subset_roundtrip():
    s = frozenset({1, 4, 7})
    assert parse_node_subset(serialize_node_subset(s)) == s


def test_sparsifier_identity():
    g = Graph.build(3, [(0, 1, 1), (1, 2, 1)])
    h = Sparsifier.identity(g)
    assert h.graph == g
    assert np.array_equal(h.base_degrees, degrees(g))


def test_cut_of_computes_value():
    g = Graph.build(3, [(0, 1, 2), (1, 2, 3)])
    c = Cut.of(g, {1})
    assert c.value == 5
