"""Graph family generators used by the CLI and the benches.

All randomized families draw from an explicit seeded generator; nothing
reads ambient entropy.
"""

from __future__ import annotations

import itertools
import math

import networkx as nx
import numpy as np

from .graph import Graph

__all__ = [
    "clique",
    "clique_of_cliques",
    "alt_cycle",
    "gnp",
    "path",
    "star",
    "dumbbell",
    "random_regular",
    "FAMILIES",
]


def clique(n: int) -> Graph:
    if n < 1:
        raise ValueError("clique needs at least 1 node")
    idx = np.arange(n, dtype=np.int64)
    u, v = np.meshgrid(idx, idx, indexing="ij")
    m = u < v
    edges = np.column_stack([u[m], v[m], np.ones(int(m.sum()), dtype=np.int64)])
    return Graph.build(n, edges)


def clique_of_cliques(n_base: int, blob: int | None = None) -> Graph:
    """Replace each node of K_{n_base} with a clique of ``blob`` nodes
    (default 10 * sqrt(n_base)), spreading each node's original edges so
    that no blob node carries more than sqrt(n_base) of them."""
    if n_base < 2:
        raise ValueError("base clique needs at least 2 nodes")
    if blob is None:
        blob = 10 * math.isqrt(n_base)
        if math.isqrt(n_base) ** 2 != n_base:
            blob = 10 * math.ceil(math.sqrt(n_base))
    if blob < 1:
        raise ValueError("blob size must be positive")
    n = n_base * blob
    edges = []
    for i in range(n_base):
        base = i * blob
        for a, b in itertools.combinations(range(blob), 2):
            edges.append((base + a, base + b, 1))
    # original clique edges, round-robin over blob nodes at each endpoint
    slot = [0] * n_base
    for i, j in itertools.combinations(range(n_base), 2):
        a = i * blob + slot[i] % blob
        b = j * blob + slot[j] % blob
        slot[i] += 1
        slot[j] += 1
        edges.append((a, b, 1))
    return Graph.build(n, edges)


def alt_cycle(n: int, scale: int = 1) -> Graph:
    """Weighted cycle v_1..v_n with alternating weights: n*scale on edges
    (v_i, v_{i+1}) for odd i, 0.4*n*scale for even i, and 0.4*n*scale - 1 on
    the closing edge (v_1, v_n). Weights must come out integral."""
    if n < 4 or n % 2:
        raise ValueError("alternating cycle needs an even n >= 4")
    heavy = n * scale
    light2 = 2 * n * scale
    if light2 % 5:
        raise ValueError("0.4 * n * scale must be an integer; adjust scale")
    light = light2 // 5
    if light < 2:
        raise ValueError("scale too small: closing weight must be positive")
    edges = []
    for i in range(1, n):  # edge (v_i, v_{i+1}), 1-based i
        w = heavy if i % 2 == 1 else light
        edges.append((i - 1, i, w))
    edges.append((0, n - 1, light - 1))
    return Graph.build(n, edges)


def gnp(n: int, p: float, seed: int = 0) -> Graph:
    if n < 1 or not 0 <= p <= 1:
        raise ValueError("need n >= 1 and p in [0, 1]")
    rng = np.random.default_rng(seed)
    idx = np.arange(n, dtype=np.int64)
    u, v = np.meshgrid(idx, idx, indexing="ij")
    m = u < v
    uu, vv = u[m], v[m]
    pick = rng.random(uu.shape[0]) < p
    edges = np.column_stack([uu[pick], vv[pick], np.ones(int(pick.sum()), dtype=np.int64)])
    return Graph.build(n, edges)


def path(n: int) -> Graph:
    if n < 1:
        raise ValueError("path needs at least 1 node")
    return Graph.build(n, [(i, i + 1, 1) for i in range(n - 1)])


def star(n: int) -> Graph:
    """K_{1,n-1}: node 0 is the center."""
    if n < 1:
        raise ValueError("star needs at least 1 node")
    return Graph.build(n, [(0, i, 1) for i in range(1, n)])


def dumbbell(k: int) -> Graph:
    """Two k-cliques joined by a single edge."""
    if k < 2:
        raise ValueError("dumbbell cliques need at least 2 nodes each")
    edges = [(u, v, 1) for u, v in itertools.combinations(range(k), 2)]
    edges += [(u + k, v + k, 1) for u, v in itertools.combinations(range(k), 2)]
    edges.append((k - 1, k, 1))
    return Graph.build(2 * k, edges)


def random_regular(n: int, d: int, seed: int = 0) -> Graph:
    if d < 0 or n * d % 2 or d >= n:
        raise ValueError("need 0 <= d < n with n*d even")
    gx = nx.random_regular_graph(d, n, seed=seed)
    return Graph.build(n, [(u, v, 1) for u, v in gx.edges()])


FAMILIES = {
    "clique": clique,
    "clique-of-cliques": clique_of_cliques,
    "alt-cycle": alt_cycle,
    "gnp": gnp,
    "path": path,
    "star": star,
    "dumbbell": dumbbell,
    "random-regular": random_regular,
}
