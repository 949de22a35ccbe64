"""Bipartite-graph core.

Validated two-colored simple graphs (color classes "emerald" and "violet"),
deterministic spanning-tree enumeration, minimal directed cuts with their sign
functionals, the alternating-cycle compatibility test for pairs of spanning
trees, plus ordinary multigraphs with two independent T(x,1) oracles.

Everything here is immutable after construction and all operations are pure
functions, so concurrent evaluation is safe.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .polynomial import Polynomial

Edge = tuple[str, str]


@dataclass(frozen=True)
class BipartiteGraph:
    """A labeled two-colored simple graph.

    `edges` are (emerald label, violet label) pairs, stored sorted by class
    index so that all enumeration orders are reproducible.  Labels must be
    unique across both classes because lattice points are indexed by the
    disjoint union of the classes.
    """

    emerald: tuple[str, ...]
    violet: tuple[str, ...]
    edges: tuple[Edge, ...]
    is_connected: bool

    @property
    def n_vertices(self) -> int:
        return len(self.emerald) + len(self.violet)

    def class_labels(self, class_choice: str) -> tuple[str, ...]:
        if class_choice == "emerald":
            return self.emerald
        if class_choice == "violet":
            return self.violet
        raise ValueError(f"unknown color class {class_choice!r}")

    def other_class(self, class_choice: str) -> str:
        return "violet" if class_choice == "emerald" else "emerald"

    def describe(self) -> str:
        return f"bipartite({len(self.emerald)}+{len(self.violet)}v,{len(self.edges)}e)"


@dataclass(frozen=True)
class SpanningTree:
    """An edge subset that is acyclic, connected, and spans the parent graph."""

    edges: frozenset[Edge]

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self) -> Iterator[Edge]:
        return iter(sorted(self.edges))

    def __contains__(self, edge: Edge) -> bool:
        return edge in self.edges

    def sort_key(self) -> tuple[Edge, ...]:
        return tuple(sorted(self.edges))


@dataclass(frozen=True)
class DirectedCut:
    """A cut whose edges all meet the S side of the splitting at a violet vertex.

    The sign functional takes +1 on (S intersect violet) and (T intersect
    emerald), -1 elsewhere; it evaluates to 2 on the polytope vertex of every
    cut edge and 0 on all other polytope vertices.
    """

    s_side: frozenset[str]
    t_side: frozenset[str]
    edges: frozenset[Edge]

    def sign(self, graph: BipartiteGraph, label: str) -> int:
        violet = label in set(graph.violet)
        in_s = label in self.s_side
        return 1 if (violet and in_s) or (not violet and not in_s) else -1

    def weights(self, graph: BipartiteGraph) -> tuple[int, ...]:
        """Sign per coordinate, in emerald-then-violet coordinate order."""
        v_set = self.s_side
        out = []
        for e in graph.emerald:
            out.append(-1 if e in v_set else 1)
        for v in graph.violet:
            out.append(1 if v in v_set else -1)
        return tuple(out)

    def value(self, graph: BipartiteGraph, point: Sequence[int]) -> int:
        return sum(w * p for w, p in zip(self.weights(graph), point))


@dataclass(frozen=True)
class OrdinaryGraph:
    """A loopless multigraph; parallel edges are kept as separate instances."""

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]

    @property
    def is_connected(self) -> bool:
        if len(self.vertices) <= 1:
            return True
        index = {v: i for i, v in enumerate(self.vertices)}
        pairs = [(index[u], index[v]) for u, v in self.edges]
        return _connected(len(self.vertices), pairs)

    def describe(self) -> str:
        return f"ordinary({len(self.vertices)}v,{len(self.edges)}e)"


# ---------------------------------------------------------------------------
# construction and validation


def build_graph(emerald: Sequence[str], violet: Sequence[str],
                edges: Iterable[Edge]) -> BipartiteGraph:
    """Validate and build a bipartite graph; computes the connectivity flag."""
    emerald = tuple(str(x) for x in emerald)
    violet = tuple(str(x) for x in violet)
    if not emerald or not violet:
        raise ValueError("empty color class")
    if len(set(emerald)) != len(emerald) or len(set(violet)) != len(violet):
        raise ValueError("duplicate label within a color class")
    if set(emerald) & set(violet):
        raise ValueError("label used in both color classes")
    e_index = {x: i for i, x in enumerate(emerald)}
    v_index = {x: i for i, x in enumerate(violet)}
    seen = set()
    normalized = []
    for pair in edges:
        if len(tuple(pair)) != 2:
            raise ValueError(f"malformed edge {pair!r}")
        e, v = pair
        e, v = str(e), str(v)
        if e not in e_index:
            raise ValueError(f"unknown emerald label {e!r}")
        if v not in v_index:
            raise ValueError(f"unknown violet label {v!r}")
        if (e, v) in seen:
            raise ValueError(f"duplicate edge ({e!r}, {v!r})")
        seen.add((e, v))
        normalized.append((e, v))
    normalized.sort(key=lambda ev: (e_index[ev[0]], v_index[ev[1]]))
    ne = len(emerald)
    pairs = [(e_index[e], ne + v_index[v]) for e, v in normalized]
    connected = _connected(ne + len(violet), pairs)
    return BipartiteGraph(emerald, violet, tuple(normalized), connected)


def build_ordinary(vertices: Sequence[str], edges: Iterable[tuple[str, str]]) -> OrdinaryGraph:
    vertices = tuple(str(x) for x in vertices)
    if not vertices:
        raise ValueError("graph needs at least one vertex")
    if len(set(vertices)) != len(vertices):
        raise ValueError("duplicate vertex label")
    vset = set(vertices)
    out = []
    for pair in edges:
        u, v = (str(x) for x in pair)
        if u not in vset or v not in vset:
            raise ValueError(f"unknown vertex in edge ({u!r}, {v!r})")
        if u == v:
            raise ValueError(f"loop at {u!r} not allowed")
        out.append((u, v))
    return OrdinaryGraph(vertices, tuple(out))


def _connected(n: int, pairs: Sequence[tuple[int, int]]) -> bool:
    if n == 0:
        return False
    adj = [[] for _ in range(n)]
    for a, b in pairs:
        adj[a].append(b)
        adj[b].append(a)
    seen = [False] * n
    stack = [0]
    seen[0] = True
    count = 1
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if not seen[y]:
                seen[y] = True
                count += 1
                stack.append(y)
    return count == n


def vertex_indices(graph: BipartiteGraph) -> dict[str, int]:
    """Label -> index in the combined emerald-then-violet coordinate order."""
    out = {e: i for i, e in enumerate(graph.emerald)}
    ne = len(graph.emerald)
    out.update({v: ne + i for i, v in enumerate(graph.violet)})
    return out


def edge_index_pairs(graph: BipartiteGraph) -> list[tuple[int, int]]:
    idx = vertex_indices(graph)
    return [(idx[e], idx[v]) for e, v in graph.edges]


def require_connected(graph: BipartiteGraph) -> None:
    if not graph.is_connected:
        raise ValueError("graph must be connected")


# ---------------------------------------------------------------------------
# spanning trees


def _spanning_tree_index_sets(n: int, endpoints: Sequence[tuple[int, int]]) -> list[tuple[int, ...]]:
    """All spanning trees of a connected (multi)graph, as sorted edge-index
    tuples in lexicographic order."""
    m = len(endpoints)
    trees: list[tuple[int, ...]] = []

    def connectable(comp: tuple[int, ...], start: int) -> bool:
        parent: dict[int, int] = {}

        def find(x: int) -> int:
            while parent.get(x, x) != x:
                parent[x] = parent.get(parent[x], parent[x])
                x = parent[x]
            return x

        for i in range(start, m):
            a, b = endpoints[i]
            ra, rb = find(comp[a]), find(comp[b])
            if ra != rb:
                parent[ra] = rb
        roots = {find(c) for c in comp}
        return len(roots) == 1

    chosen: list[int] = []

    def rec(i: int, comp: tuple[int, ...], ncomp: int) -> None:
        if ncomp == 1:
            trees.append(tuple(chosen))
            return
        if i == m:
            return
        a, b = endpoints[i]
        ca, cb = comp[a], comp[b]
        if ca != cb:
            merged = tuple(ca if c == cb else c for c in comp)
            chosen.append(i)
            rec(i + 1, merged, ncomp - 1)
            chosen.pop()
        if connectable(comp, i + 1):
            rec(i + 1, comp, ncomp)

    rec(0, tuple(range(n)), n)
    return trees


@lru_cache(maxsize=64)
def enumerate_spanning_trees(graph: BipartiteGraph) -> tuple[SpanningTree, ...]:
    """Every spanning tree exactly once, lexicographic by sorted edge list."""
    require_connected(graph)
    pairs = edge_index_pairs(graph)
    index_sets = _spanning_tree_index_sets(graph.n_vertices, pairs)
    edges = graph.edges
    return tuple(SpanningTree(frozenset(edges[i] for i in t)) for t in index_sets)


def _bareiss_det(mat: list[list[int]]) -> int:
    """Fraction-free exact determinant of an integer matrix."""
    n = len(mat)
    if n == 0:
        return 1
    m = [row[:] for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if m[r][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def matrix_tree_count(graph: BipartiteGraph) -> int:
    """Number of spanning trees via the Laplacian determinant (independent of
    the enumeration above, so usable as an oracle against it)."""
    require_connected(graph)
    n = graph.n_vertices
    lap = [[0] * n for _ in range(n)]
    for a, b in edge_index_pairs(graph):
        lap[a][a] += 1
        lap[b][b] += 1
        lap[a][b] -= 1
        lap[b][a] -= 1
    minor = [row[1:] for row in lap[1:]]
    return _bareiss_det(minor)


def first_betti(graph: BipartiteGraph) -> int:
    """Nullity |edges| - |vertices| + 1 of a connected graph."""
    require_connected(graph)
    return len(graph.edges) - graph.n_vertices + 1


def count_four_cycles(graph: BipartiteGraph) -> int:
    """Number of distinct 4-cycles (as unordered edge sets)."""
    neighbors = {e: set() for e in graph.emerald}
    for e, v in graph.edges:
        neighbors[e].add(v)
    total = 0
    ems = graph.emerald
    for i in range(len(ems)):
        for j in range(i + 1, len(ems)):
            common = len(neighbors[ems[i]] & neighbors[ems[j]])
            total += math.comb(common, 2)
    return total


# ---------------------------------------------------------------------------
# directed cuts


@lru_cache(maxsize=128)
def minimal_directed_cuts(graph: BipartiteGraph, cap: int = 20) -> tuple[DirectedCut, ...]:
    """All minimal directed cuts of a connected bipartite graph.

    Enumerates splittings whose two sides both induce connected subgraphs
    (which characterizes minimality among nonempty cuts), keeps the directed
    ones, and finally discards any cut containing another as a safety net.
    Exponential in the vertex count, hence the size cap.
    """
    require_connected(graph)
    n = graph.n_vertices
    if n > cap:
        raise ValueError(f"size cap exceeded: {n} vertices > {cap}")
    labels = list(graph.emerald) + list(graph.violet)
    ne = len(graph.emerald)
    pairs = edge_index_pairs(graph)
    adj = [0] * n
    for a, b in pairs:
        adj[a] |= 1 << b
        adj[b] |= 1 << a
    full = (1 << n) - 1

    def connected_mask(mask: int) -> bool:
        if mask == 0:
            return False
        start = mask & -mask
        seen = start
        frontier = start
        while frontier:
            nxt = 0
            f = frontier
            while f:
                bit = f & -f
                f ^= bit
                nxt |= adj[bit.bit_length() - 1]
            frontier = (nxt & mask) & ~seen
            seen |= frontier
        return seen == mask

    found: dict[frozenset[Edge], DirectedCut] = {}
    for s_mask in range(1, full):
        t_mask = full & ~s_mask
        if t_mask == 0:
            continue
        cut_edges = []
        directed = True
        for (a, b), (e_lab, v_lab) in zip(pairs, graph.edges):
            a_in_s = bool(s_mask >> a & 1)
            b_in_s = bool(s_mask >> b & 1)
            if a_in_s == b_in_s:
                continue
            # a is the emerald endpoint; the cut must meet S at the violet one
            if a_in_s:
                directed = False
                break
            cut_edges.append((e_lab, v_lab))
        if not directed or not cut_edges:
            continue
        if not connected_mask(s_mask) or not connected_mask(t_mask):
            continue
        key = frozenset(cut_edges)
        if key not in found:
            s_side = frozenset(labels[i] for i in range(n) if s_mask >> i & 1)
            t_side = frozenset(labels[i] for i in range(n) if t_mask >> i & 1)
            found[key] = DirectedCut(s_side, t_side, key)
    # containment filter; with the connectivity condition above this should
    # never remove anything, but it is cheap insurance
    cuts = list(found.values())
    minimal = [c for c in cuts
               if not any(other.edges < c.edges for other in cuts)]
    minimal.sort(key=lambda c: sorted(c.edges))
    return tuple(minimal)


# ---------------------------------------------------------------------------
# alternating cycles / compatibility


def alternating_cycle_exists(graph: BipartiteGraph, tree1: SpanningTree,
                             tree2: SpanningTree) -> bool:
    """Is there a cycle of distinct edges, alternately from tree1 and tree2?

    Encoded as a digraph with arcs emerald->violet for tree1 edges and
    violet->emerald for tree2 edges; an alternating cycle is exactly a simple
    directed cycle of length >= 4 (2-cycles arise from shared edges and do
    not count).  Symmetric in its arguments.
    """
    idx = vertex_indices(graph)
    n = graph.n_vertices
    arcs = [0] * n
    for e, v in tree1.edges:
        arcs[idx[e]] |= 1 << idx[v]
    for e, v in tree2.edges:
        arcs[idx[v]] |= 1 << idx[e]
    ne = len(graph.emerald)

    def dfs(v: int, visited: int, depth: int, start: int, banned: int) -> bool:
        targets = arcs[v]
        if depth >= 3 and targets >> start & 1:
            return True
        targets &= ~visited & ~banned
        while targets:
            bit = targets & -targets
            targets ^= bit
            w = bit.bit_length() - 1
            if dfs(w, visited | bit, depth + 1, start, banned):
                return True
        return False

    for s in range(ne):
        # canonical start: forbid emerald vertices smaller than s
        banned = (1 << s) - 1 if s else 0
        if dfs(s, 1 << s, 0, s, banned):
            return True
    return False


def trees_compatible(graph: BipartiteGraph, tree1: SpanningTree,
                     tree2: SpanningTree) -> bool:
    """Two spanning trees are compatible when no alternating cycle exists;
    their simplices in the root polytope then meet in a common face."""
    return not alternating_cycle_exists(graph, tree1, tree2)


# ---------------------------------------------------------------------------
# ordinary graphs: incidence construction and T(x,1) oracles


def incidence_bipartite(graph: OrdinaryGraph) -> BipartiteGraph:
    """Subdivide each edge: emerald class = original vertices, violet class =
    edge midpoints, bipartite edges = incidences."""
    midpoints = [f"{u}~{v}:{i}" for i, (u, v) in enumerate(graph.edges)]
    edges = []
    for mid, (u, v) in zip(midpoints, graph.edges):
        edges.append((u, mid))
        edges.append((v, mid))
    return build_graph(graph.vertices, midpoints, edges)


def enumerate_spanning_trees_ordinary(graph: OrdinaryGraph) -> list[tuple[int, ...]]:
    """Spanning trees of a multigraph as sorted tuples of edge-instance indices."""
    if not graph.is_connected:
        raise ValueError("graph must be connected")
    index = {v: i for i, v in enumerate(graph.vertices)}
    pairs = [(index[u], index[v]) for u, v in graph.edges]
    return _spanning_tree_index_sets(len(graph.vertices), pairs)


def tutte_x1_oracle(graph: OrdinaryGraph,
                    edge_order: Sequence[int] | None = None) -> Polynomial:
    """T(x,1) as the generating function of classical internal activity.

    An edge of a spanning tree is internally active when it is the smallest,
    under `edge_order` (a permutation of edge-instance indices; default is
    input order), among the edges of the graph reconnecting the two components
    of the tree with that edge removed.
    """
    if not graph.is_connected:
        raise ValueError("graph must be connected")
    m = len(graph.edges)
    order = list(range(m)) if edge_order is None else list(edge_order)
    if sorted(order) != list(range(m)):
        raise ValueError("edge_order must be a permutation of edge indices")
    rank = [0] * m
    for pos, e in enumerate(order):
        rank[e] = pos
    index = {v: i for i, v in enumerate(graph.vertices)}
    pairs = [(index[u], index[v]) for u, v in graph.edges]
    n = len(graph.vertices)
    counts: Counter[int] = Counter()
    for tree in _spanning_tree_index_sets(n, pairs):
        active = 0
        tree_set = set(tree)
        for e in tree:
            side = _component_after_removal(n, pairs, tree_set, e)
            best = rank[e]
            for f, (a, b) in enumerate(pairs):
                if (side >> a & 1) != (side >> b & 1) and rank[f] < best:
                    best = rank[f]
            if best == rank[e]:
                active += 1
        counts[active] += 1
    return Polynomial.from_terms(counts)


def _component_after_removal(n: int, pairs: Sequence[tuple[int, int]],
                             tree_set: set[int], removed: int) -> int:
    adj = [[] for _ in range(n)]
    for e in tree_set:
        if e == removed:
            continue
        a, b = pairs[e]
        adj[a].append(b)
        adj[b].append(a)
    start = pairs[removed][0]
    seen = 1 << start
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if not seen >> y & 1:
                seen |= 1 << y
                stack.append(y)
    return seen


def tutte_x1_deletion_contraction(graph: OrdinaryGraph) -> Polynomial:
    """T(x,1) by the deletion-contraction recursion (bridges give a factor x,
    loops a factor 1).  Independent of the activity computation above."""
    if not graph.is_connected:
        raise ValueError("graph must be connected")
    index = {v: i for i, v in enumerate(graph.vertices)}
    pairs = tuple((index[u], index[v]) for u, v in graph.edges)

    def rec(n: int, edges: tuple[tuple[int, int], ...]) -> Polynomial:
        edges = tuple((a, b) for a, b in edges if a != b)  # drop loops
        if not edges:
            return Polynomial((1,))
        a, b = edges[0]
        rest = edges[1:]
        # bridge test: does rest connect a and b?
        if _connects(n, rest, a, b):
            deleted = rec(n, rest)
            contracted = rec(n, _contract(rest, a, b))
            return deleted + contracted
        # bridge: contract it, multiply by x
        return rec(n, _contract(rest, a, b)).shift(1)

    return rec(len(graph.vertices), pairs)


def _connects(n: int, edges: tuple[tuple[int, int], ...], a: int, b: int) -> bool:
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = 1 << a
    stack = [a]
    while stack:
        x = stack.pop()
        if x == b:
            return True
        for y in adj[x]:
            if not seen >> y & 1:
                seen |= 1 << y
                stack.append(y)
    return False


def _contract(edges: tuple[tuple[int, int], ...], a: int, b: int) -> tuple[tuple[int, int], ...]:
    # merge b into a
    return tuple((a if u == b else u, a if v == b else v) for u, v in edges)
