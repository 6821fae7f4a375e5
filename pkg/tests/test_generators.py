import math

import pytest

from friendlycuts.generators import (
    FAMILIES,
    alt_cycle,
    clique,
    clique_of_cliques,
    dumbbell,
    gnp,
    path,
    random_regular,
    star,
)
from friendlycuts.graph import degrees


def weight_map(g):
    return {(u, v): w for u, v, w in g.edge_list()}


def test_clique_edges():
    g = clique(6)
    assert g.n == 6
    assert g.edge_count == 15
    assert all(int(d) == 5 for d in degrees(g))


def test_path_and_star():
    assert path(7).edge_count == 6
    s = star(7)
    assert s.edge_count == 6
    assert int(degrees(s)[0]) == 6


def test_dumbbell_bridge():
    g = dumbbell(4)
    assert g.n == 8
    assert g.edge_count == 13
    assert weight_map(g)[(3, 4)] == 1


def test_alt_cycle_reference_weights():
    g = alt_cycle(10, 10)
    wm = weight_map(g)
    assert {wm[(i, i + 1)] for i in range(9)} == {100, 40}
    assert wm[(0, 9)] == 39
    assert g.edge_count == 10


def test_alt_cycle_rejects_bad_parameters():
    with pytest.raises(ValueError):
        alt_cycle(7, 10)  # odd n
    with pytest.raises(ValueError):
        alt_cycle(8, 1)  # 0.4 * n * scale not integral
    with pytest.raises(ValueError):
        alt_cycle(2, 10)


def test_clique_of_cliques_default_blob():
    g = clique_of_cliques(64)
    # 64 blobs of 80 nodes each
    assert g.n == 64 * 80
    base = 64 * 63 // 2
    assert g.edge_count == 64 * (80 * 79 // 2) + base
    # round-robin keeps every node's share of base edges near sqrt(n_base)
    deg = degrees(g)
    assert int(deg.max()) <= 79 + math.ceil(63 / 80) + 1


def test_clique_of_cliques_custom_blob():
    g = clique_of_cliques(4, blob=3)
    assert g.n == 12
    assert g.edge_count == 4 * 3 + 6


def test_gnp_bounds_and_determinism():
    a = gnp(30, 0.3, seed=5)
    b = gnp(30, 0.3, seed=5)
    c = gnp(30, 0.3, seed=6)
    assert a == b
    assert a != c
    assert gnp(10, 0.0).edge_count == 0
    assert gnp(10, 1.0).edge_count == 45


def test_random_regular_degrees():
    g = random_regular(12, 4, seed=2)
    assert all(int(d) == 4 for d in degrees(g))
    assert random_regular(12, 4, seed=2) == g
    with pytest.raises(ValueError):
        random_regular(5, 3)  # n*d odd


def test_family_registry():
    assert set(FAMILIES) == {
        "clique", "clique-of-cliques", "alt-cycle", "gnp",
        "path", "star", "dumbbell", "random-regular",
    }
