"""Gomory-Hu (cut-equivalent) trees and artifacts built on top of them.

Included here: the classical construction via partition-tree refinement with
genuine contraction of the far side (so every induced tree cut is a real
minimum cut in the input), path-minimum queries, the friendly minimum-cut
sparsifier obtained by contracting unfriendly-only tree components,
capacitated auxiliary graphs of a partition tree and their sparsified
variant, and an accelerated single-source / tree pipeline that merges a
Gomory-Hu tree of a friendly cut sparsifier with the unfriendly-exact
single-source routine.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .graph import (
    ContractionMap,
    Cut,
    Graph,
    Sparsifier,
    contract,
    cut_value,
    degrees,
    is_friendly,
)
from .maxflow import max_flow
from .sparsify import SparsifyConfig, friendly_sparsify
from .ss_unfriendly import EstimateTable, single_source_unfriendly

__all__ = [
    "GHTree",
    "PartitionTree",
    "gomory_hu",
    "gh_query",
    "validate_ghtree",
    "friendly_mincut_sparsifier_from_gh",
    "build_cag",
    "build_sparsified_cag",
    "cag_totals",
    "accelerated_single_source",
    "accelerated_gomory_hu",
    "serialize_ghtree",
    "parse_ghtree",
]


@dataclass(frozen=True)
class GHTree:
    """Cut-equivalent tree: one weighted tree per connected component.

    Pairs in different components have min-cut value 0; the stored edges
    number n minus the component count.
    """

    n: int
    edges: tuple[tuple[int, int, int], ...]

    @property
    def component_count(self) -> int:
        return self.n - len(self.edges)

    def adjacency(self) -> list[list[tuple[int, int]]]:
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for u, v, w in self.edges:
            adj[u].append((v, w))
            adj[v].append((u, w))
        return adj

    def components(self) -> list[frozenset[int]]:
        adj = self.adjacency()
        seen = [False] * self.n
        out = []
        for r in range(self.n):
            if seen[r]:
                continue
            comp = []
            queue = deque([r])
            seen[r] = True
            while queue:
                x = queue.popleft()
                comp.append(x)
                for y, _ in adj[x]:
                    if not seen[y]:
                        seen[y] = True
                        queue.append(y)
            out.append(frozenset(comp))
        return out


@dataclass(frozen=True)
class PartitionTree:
    """Super-nodes partitioning V with a tree over the super-node indices."""

    classes: tuple[frozenset[int], ...]
    edges: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        k = len(self.classes)
        seen: set[int] = set()
        for c in self.classes:
            if not c:
                raise ValueError("empty super-node")
            if c & seen:
                raise ValueError("super-nodes must be disjoint")
            seen |= c
        if len(self.edges) != k - 1:
            raise ValueError("partition tree must have k-1 edges")
        parent = list(range(k))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for i, j, _ in self.edges:
            ri, rj = find(i), find(j)
            if ri == rj:
                raise ValueError("partition tree edges contain a cycle")
            parent[rj] = ri

    @property
    def n(self) -> int:
        return sum(len(c) for c in self.classes)

    @property
    def k(self) -> int:
        return len(self.classes)


def _tree_components_without(pt_k: int, edges, removed: int) -> list[list[int]]:
    """Connected components of the super-node tree after deleting one node."""
    adj: list[list[int]] = [[] for _ in range(pt_k)]
    for i, j, _ in edges:
        adj[i].append(j)
        adj[j].append(i)
    seen = [False] * pt_k
    seen[removed] = True
    comps = []
    for r in range(pt_k):
        if seen[r]:
            continue
        comp = []
        queue = deque([r])
        seen[r] = True
        while queue:
            x = queue.popleft()
            comp.append(x)
            for y in adj[x]:
                if not seen[y]:
                    seen[y] = True
                    queue.append(y)
        comps.append(comp)
    return comps


def _component_nodes(g: Graph) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(g.n)]
    for u, v, _ in g.edge_list():
        adj[u].append(v)
        adj[v].append(u)
    seen = [False] * g.n
    out = []
    for r in range(g.n):
        if seen[r]:
            continue
        comp = []
        queue = deque([r])
        seen[r] = True
        while queue:
            x = queue.popleft()
            comp.append(x)
            for y in adj[x]:
                if not seen[y]:
                    seen[y] = True
                    queue.append(y)
        out.append(comp)
    return out


def _cut_provider_maxflow(aux: Graph, s: int, t: int) -> tuple[int, frozenset[int]]:
    value, cut = max_flow(aux, s, t)
    return value, cut.side


def _gomory_hu_component(g: Graph, nodes: list[int], cut_provider) -> list[tuple[int, int, int]]:
    """Gomory-Hu over one connected component, with real contraction of the
    far side of the partition tree at every refinement step."""
    if len(nodes) == 1:
        return []
    classes: list[set[int]] = [set(nodes)]
    tree: list[list[int]] = []  # mutable (i, j, w) rows
    pending = deque([0])
    while pending:
        i = pending.popleft()
        cls = classes[i]
        if len(cls) < 2:
            continue
        ordered = sorted(cls)
        s, t = ordered[0], ordered[1]
        # auxiliary graph: class i stays expanded, each tree component away
        # from it collapses to one node; other graph components get label -1
        comps = _tree_components_without(len(classes), tree, i)
        labels = np.full(g.n, -1, dtype=np.int64)
        for pos, v in enumerate(ordered):
            labels[v] = pos
        next_label = len(cls)
        comp_node: dict[int, int] = {}
        for comp in comps:
            for ci in comp:
                comp_node[ci] = next_label
                for v in classes[ci]:
                    labels[v] = next_label
            next_label += 1
        if g.edges.size:
            lu = labels[g.edges[:, 0]]
            lv = labels[g.edges[:, 1]]
            keep = (lu >= 0) & (lv >= 0) & (lu != lv)
            aux = Graph.build(next_label,
                              np.column_stack([lu[keep], lv[keep], g.edges[keep, 2]]))
        else:
            aux = Graph.build(next_label)
        value, side = cut_provider(aux, 0, 1)  # labels of s and t
        side_mask = np.zeros(aux.n, dtype=bool)
        side_mask[list(side)] = True
        in_a = {v for v in cls if side_mask[labels[v]]}
        in_b = cls - in_a
        assert s in in_a and t in in_b
        j = len(classes)
        classes[i] = in_a
        classes.append(in_b)
        # reattach old tree neighbors of i to whichever side their component fell on
        for row in tree:
            a, b, _ = row
            other = b if a == i else (a if b == i else None)
            if other is None:
                continue
            if not side_mask[comp_node[other]]:
                if a == i:
                    row[0] = j
                else:
                    row[1] = j
        tree.append([i, j, value])
        if len(in_a) > 1:
            pending.append(i)
        if len(in_b) > 1:
            pending.append(j)
    out = []
    for i, j, w in tree:
        u = next(iter(classes[i]))
        v = next(iter(classes[j]))
        out.append((u, v, int(w)))
    return out


def gomory_hu(g: Graph) -> GHTree:
    """Cut-equivalent tree via n-1 max-flows with far-side contraction."""
    edges: list[tuple[int, int, int]] = []
    for comp in _component_nodes(g):
        edges.extend(_gomory_hu_component(g, comp, _cut_provider_maxflow))
    return GHTree(n=g.n, edges=tuple(edges))


def gh_query(t: GHTree, s: int, t2: int) -> tuple[int, Cut]:
    """Min s,t value and the cut induced by the bottleneck tree edge.

    Ties break toward the bottleneck edge nearest s, so answers are
    deterministic. Cross-component pairs get value 0 and s's component.
    """
    if s == t2:
        raise ValueError("query endpoints must differ")
    for v in (s, t2):
        if not 0 <= v < t.n:
            raise ValueError(f"node {v} out of range")
    adj = t.adjacency()
    prev: dict[int, tuple[int, int]] = {s: (-1, 0)}
    queue = deque([s])
    while queue and t2 not in prev:
        x = queue.popleft()
        for y, w in adj[x]:
            if y not in prev:
                prev[y] = (x, w)
                queue.append(y)
    if t2 not in prev:
        for comp in t.components():
            if s in comp:
                return 0, Cut(side=comp, value=0)
        raise AssertionError("unreachable")
    path = []
    x = t2
    while x != s:
        px, w = prev[x]
        path.append((px, x, w))
        x = px
    path.reverse()
    best_idx = 0
    for idx, (_, _, w) in enumerate(path):
        if w < path[best_idx][2]:
            best_idx = idx
    bu, bv, bw = path[best_idx]
    # side of s after removing the bottleneck edge
    side = set()
    queue = deque([s])
    side.add(s)
    while queue:
        x = queue.popleft()
        for y, _ in adj[x]:
            if y not in side and not ({x, y} == {bu, bv}):
                side.add(y)
                queue.append(y)
    return bw, Cut(side=frozenset(side), value=bw)


def validate_ghtree(g: Graph, t: GHTree, check_values: bool = True) -> None:
    """Structural validation plus (optionally) induced cut values in g.

    Raises ValueError on any violation. Minimality of the induced cuts is
    not checked here; the enumeration oracle covers that in tests.
    """
    if t.n != g.n:
        raise ValueError("tree and graph disagree on node count")
    if len(t.edges) != g.n - len(_component_nodes(g)):
        raise ValueError("tree edge count does not match component count")
    seen_pairs = set()
    for u, v, w in t.edges:
        if u == v or not (0 <= u < t.n and 0 <= v < t.n):
            raise ValueError("bad tree edge endpoints")
        if w <= 0:
            raise ValueError("tree edge weights must be positive")
        key = (min(u, v), max(u, v))
        if key in seen_pairs:
            raise ValueError("duplicate tree edge")
        seen_pairs.add(key)
    for gcomp, tcomp_nodes in zip(sorted(_component_nodes(g), key=min),
                                  sorted(t.components(), key=min)):
        if frozenset(gcomp) != tcomp_nodes:
            raise ValueError("tree components do not match graph components")
    if check_values:
        for u, v, w in t.edges:
            _, cut = gh_query(t, u, v)
            if cut_value(g, cut.side) != w:
                raise ValueError(f"tree edge ({u},{v},{w}) cut has wrong value in g")


def _tree_edge_sides(t: GHTree) -> list[tuple[tuple[int, int, int], np.ndarray]]:
    """For each tree edge, the boolean side mask of the subtree below it,
    from one rooted DFS per component (entry/exit interval containment)."""
    adj = t.adjacency()
    tin = np.zeros(t.n, dtype=np.int64)
    tout = np.zeros(t.n, dtype=np.int64)
    parent = np.full(t.n, -1, dtype=np.int64)
    order = np.zeros(t.n, dtype=np.int64)
    clock = 0
    seen = [False] * t.n
    for r in range(t.n):
        if seen[r]:
            continue
        stack = [(r, iter(adj[r]))]
        seen[r] = True
        tin[r] = clock
        order[clock] = r
        clock += 1
        while stack:
            x, it = stack[-1]
            advanced = False
            for y, _ in it:
                if not seen[y]:
                    seen[y] = True
                    parent[y] = x
                    tin[y] = clock
                    order[clock] = y
                    clock += 1
                    stack.append((y, iter(adj[y])))
                    advanced = True
                    break
            if not advanced:
                tout[x] = clock
                stack.pop()
    out = []
    for u, v, w in t.edges:
        child = v if parent[v] == u else u
        assert parent[child] in (u, v)
        mask = np.zeros(t.n, dtype=bool)
        mask[order[tin[child]:tout[child]]] = True
        out.append(((u, v, w), mask))
    return out


def friendly_mincut_sparsifier_from_gh(g: Graph, t: GHTree) -> Sparsifier:
    """Contract the components of the tree spanned by unfriendly-only edges.

    The result preserves at least one minimum s,t-cut for every pair whose
    minimum cuts are all friendly.
    """
    validate_ghtree(g, t, check_values=g.n <= 64)
    unfriendly_classes = []
    for (u, v, _), mask in _tree_edge_sides(t):
        if not is_friendly(g, np.flatnonzero(mask)):
            unfriendly_classes.append((u, v))
    cmap = ContractionMap.from_classes(g.n, unfriendly_classes)
    return Sparsifier.of(g, cmap)


def partition_tree_from_gh(t: GHTree, cmap: ContractionMap) -> PartitionTree:
    """Quotient a GH tree by a contraction whose classes are tree-connected."""
    classes = tuple(frozenset(c) for c in cmap.classes())
    edges = []
    for u, v, w in t.edges:
        su, sv = int(cmap.super_of[u]), int(cmap.super_of[v])
        if su != sv:
            edges.append((su, sv, w))
    return PartitionTree(classes=classes, edges=tuple(edges))


def build_cag(g: Graph, pt: PartitionTree, i: int) -> Graph:
    """Capacitated auxiliary graph of super-node i: contract every connected
    component of the tree minus i, merge parallel edges into weights."""
    if not 0 <= i < pt.k:
        raise ValueError(f"super-node index {i} out of range")
    if pt.n != g.n:
        raise ValueError("partition tree does not cover this graph")
    comps = _tree_components_without(pt.k, pt.edges, i)
    groups = [[v] for v in sorted(pt.classes[i])]
    for comp in comps:
        groups.append([v for j in comp for v in pt.classes[j]])
    labels = np.zeros(g.n, dtype=np.int64)
    for lab, grp in enumerate(groups):
        for v in grp:
            labels[v] = lab
    return contract(g, ContractionMap.from_labels(labels))


def build_sparsified_cag(h: Sparsifier, pt: PartitionTree, i: int) -> Graph:
    """CAG construction applied to a sparsifier: contract each tree component
    away from super-node i inside h's graph. A sparsifier class straddling
    two components forces those components to merge."""
    if not 0 <= i < pt.k:
        raise ValueError(f"super-node index {i} out of range")
    if pt.n != h.map.n_original:
        raise ValueError("partition tree does not cover the sparsifier's base graph")
    comps = _tree_components_without(pt.k, pt.edges, i)
    # group h's super-nodes: all super-nodes touching one tree component merge
    classes = []
    for comp in comps:
        members = {int(h.map.super_of[v]) for j in comp for v in pt.classes[j]}
        classes.append(members)
    cmap = ContractionMap.from_classes(h.graph.n, classes)
    return contract(h.graph, cmap)


def cag_totals(source: Graph | Sparsifier, pt: PartitionTree) -> tuple[int, int]:
    """(sum of node counts, sum of weighted-edge counts) over all CAGs."""
    total_nodes = 0
    total_edges = 0
    for i in range(pt.k):
        if isinstance(source, Sparsifier):
            cag = build_sparsified_cag(source, pt, i)
        else:
            cag = build_cag(source, pt, i)
        total_nodes += cag.n
        total_edges += cag.edge_count
    return total_nodes, total_edges


def accelerated_single_source(g: Graph, p: int, cfg: SparsifyConfig | None = None) -> EstimateTable:
    """Exact single-source min cuts: Gomory-Hu on a friendly n-cut sparsifier
    for the friendly pairs, merged (by minimum) with the unfriendly-exact
    estimates. Every minimum cut falls to one branch, so the merge is exact."""
    if not 0 <= p < g.n:
        raise ValueError(f"pivot {p} out of range")
    if g.edges.size and int(g.edges[:, 2].max()) > 1:
        raise ValueError("accelerated pipeline requires a simple graph")
    table = single_source_unfriendly(g, p)
    h = friendly_sparsify(g, w=g.n, cfg=cfg)
    ght = gomory_hu(h.graph)
    sp = int(h.map.super_of[p])
    all_nodes = frozenset(range(g.n))
    for v in range(g.n):
        if v == p:
            continue
        sv = int(h.map.super_of[v])
        if sv == sp:
            continue  # this pair's min cuts are not friendly-preserved; other branch wins
        value, cut = gh_query(ght, sv, sp)
        side_mask = np.zeros(h.graph.n, dtype=bool)
        side_mask[list(cut.side)] = True
        side = frozenset(int(x) for x in np.flatnonzero(side_mask[h.map.super_of]))
        if p in side:
            side = all_nodes - side
        table.update(v, value, Cut(side=side, value=value))
    return table


def accelerated_gomory_hu(g: Graph, cfg: SparsifyConfig | None = None) -> GHTree:
    """Gomory-Hu recursion whose pair cuts come from the accelerated
    single-source routine whenever the auxiliary graph is simple, and from a
    plain max-flow otherwise."""
    if g.edges.size and int(g.edges[:, 2].max()) > 1:
        raise ValueError("accelerated pipeline requires a simple graph")

    def provider(aux: Graph, s: int, t: int) -> tuple[int, frozenset[int]]:
        simple = (not aux.edges.size) or int(aux.edges[:, 2].max()) == 1
        if simple and aux.n >= 3:
            table = accelerated_single_source(aux, s, cfg)
            w = table.witnesses[t]
            side = frozenset(range(aux.n)) - w.side  # orient toward s
            return w.value, side
        return _cut_provider_maxflow(aux, s, t)

    edges: list[tuple[int, int, int]] = []
    for comp in _component_nodes(g):
        edges.extend(_gomory_hu_component(g, comp, provider))
    return GHTree(n=g.n, edges=tuple(edges))


def serialize_ghtree(t: GHTree) -> str:
    lines = [f"{t.n} {t.component_count}"]
    for u, v, w in t.edges:
        lines.append(f"{u} {v} {w}")
    return "\n".join(lines) + "\n"


def parse_ghtree(text: str) -> GHTree:
    from .graph import GraphParseError

    lines = text.splitlines()
    header = None
    edges = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 2:
                raise GraphParseError("expected header 'n components'", lineno)
            try:
                header = (int(parts[0]), int(parts[1]))
            except ValueError:
                raise GraphParseError("header fields must be integers", lineno)
            continue
        if len(parts) != 3:
            raise GraphParseError("expected 'u v weight'", lineno)
        try:
            u, v, w = (int(x) for x in parts)
        except ValueError:
            raise GraphParseError("edge fields must be integers", lineno)
        edges.append((u, v, w))
    if header is None:
        raise GraphParseError("missing header", len(lines) + 1)
    n, c = header
    if len(edges) != n - c:
        raise GraphParseError(
            f"expected {n - c} edges for {n} nodes in {c} components, got {len(edges)}",
            len(lines) + 1)
    t = GHTree(n=n, edges=tuple(edges))
    if len(t.components()) != c:
        raise GraphParseError("edge list does not form the declared components",
                              len(lines) + 1)
    return t
