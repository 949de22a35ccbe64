"""Polymatroid layer.

A bipartite graph with a chosen hyperedge class induces a hypergraph whose
hypertrees are the degree-minus-one vectors of spanning trees.  This module
exposes the coverage function mu, hypertree enumeration (two independent
routes), membership, transfers of valence, favorites, realizations, and a
generic submodular oracle whose base-polytope integer points generalize the
hypertree set.

Hypertrees are plain int tuples indexed by the hyperedge class in graph label
order.  All results are cached per (graph, class); everything is pure.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Callable, Iterable, Sequence

from .bigraph import (BipartiteGraph, SpanningTree, enumerate_spanning_trees,
                      require_connected)

Vector = tuple[int, ...]

SUBSET_CAP = 20  # membership testing scans all 2^|E| subsets


def hyperedge_labels(graph: BipartiteGraph, class_choice: str) -> tuple[str, ...]:
    return graph.class_labels(class_choice)


def vertex_labels(graph: BipartiteGraph, class_choice: str) -> tuple[str, ...]:
    return graph.class_labels(graph.other_class(class_choice))


@lru_cache(maxsize=256)
def _incidence(graph: BipartiteGraph, class_choice: str) -> tuple[tuple[int, ...], ...]:
    """For each hyperedge (by index), the bitmask-free tuple of adjacent
    vertex indices in the opposite class."""
    hyper = hyperedge_labels(graph, class_choice)
    verts = vertex_labels(graph, class_choice)
    h_index = {x: i for i, x in enumerate(hyper)}
    v_index = {x: i for i, x in enumerate(verts)}
    adj: list[set[int]] = [set() for _ in hyper]
    for e, v in graph.edges:
        if class_choice == "emerald":
            adj[h_index[e]].add(v_index[v])
        else:
            adj[h_index[v]].add(v_index[e])
    return tuple(tuple(sorted(s)) for s in adj)


@lru_cache(maxsize=128)
def _mu_table(graph: BipartiteGraph, class_choice: str) -> tuple[int, ...]:
    """mu for every subset of the hyperedge class, indexed by bitmask."""
    adj = _incidence(graph, class_choice)
    k = len(adj)
    if k > SUBSET_CAP:
        raise ValueError(f"size cap exceeded: 2^{k} subsets")
    masks = [0] * k
    for i, verts in enumerate(adj):
        m = 0
        for v in verts:
            m |= 1 << v
        masks[i] = m
    table = [0] * (1 << k)
    for subset in range(1, 1 << k):
        members = [i for i in range(k) if subset >> i & 1]
        union = 0
        for i in members:
            union |= masks[i]
        # components of the restriction: hyperedges lie together exactly when
        # a chain of pairwise vertex-sharing connects them
        comp = {i: i for i in members}

        def find(x: int) -> int:
            while comp[x] != x:
                comp[x] = comp[comp[x]]
                x = comp[x]
            return x

        for a, b in combinations(members, 2):
            if masks[a] & masks[b]:
                ra, rb = find(a), find(b)
                if ra != rb:
                    comp[ra] = rb
        roots = {find(i) for i in members}
        table[subset] = bin(union).count("1") - len(roots)
    return tuple(table)


def mu(graph: BipartiteGraph, class_choice: str, subset: Iterable[str]) -> int:
    """|union of the hyperedges in `subset`| minus the number of connected
    components of the subgraph they span; mu of the empty set is 0."""
    hyper = hyperedge_labels(graph, class_choice)
    h_index = {x: i for i, x in enumerate(hyper)}
    mask = 0
    for label in subset:
        if label not in h_index:
            raise ValueError(f"label {label!r} not in the {class_choice} class")
        mask |= 1 << h_index[label]
    return _mu_table(graph, class_choice)[mask]


def tree_hypertree(graph: BipartiteGraph, tree: SpanningTree, class_choice: str) -> Vector:
    """Degree-minus-one vector of a spanning tree on the hyperedge class."""
    hyper = hyperedge_labels(graph, class_choice)
    pos = 0 if class_choice == "emerald" else 1
    deg = {x: 0 for x in hyper}
    for edge in tree.edges:
        deg[edge[pos]] += 1
    return tuple(deg[x] - 1 for x in hyper)


@lru_cache(maxsize=128)
def enumerate_hypertrees(graph: BipartiteGraph, class_choice: str) -> tuple[Vector, ...]:
    """All hypertrees, via deduplicated spanning-tree degree vectors."""
    require_connected(graph)
    seen = {tree_hypertree(graph, t, class_choice)
            for t in enumerate_spanning_trees(graph)}
    return tuple(sorted(seen))


def hypertrees_from_inequalities(graph: BipartiteGraph, class_choice: str,
                                 cap: int = SUBSET_CAP) -> tuple[Vector, ...]:
    """All hypertrees, as the integer solutions of the defining system:
    nonnegative vectors with full sum |V|-1 and partial sums bounded by mu.

    Independent of the spanning-tree route; the two must agree.
    """
    require_connected(graph)
    hyper = hyperedge_labels(graph, class_choice)
    k = len(hyper)
    if k > cap:
        raise ValueError(f"size cap exceeded: {k} hyperedges > {cap}")
    table = _mu_table(graph, class_choice)
    total = len(vertex_labels(graph, class_choice)) - 1
    singles = [table[1 << i] for i in range(k)]
    out: list[Vector] = []

    def rec(i: int, remaining: int, prefix: list[int]) -> None:
        if i == k:
            if remaining == 0:
                f = tuple(prefix)
                if _satisfies_mu(f, table, k):
                    out.append(f)
            return
        limit = min(remaining, singles[i])
        for val in range(limit + 1):
            prefix.append(val)
            rec(i + 1, remaining - val, prefix)
            prefix.pop()

    rec(0, total, [])
    return tuple(sorted(out))


def _satisfies_mu(f: Vector, table: Sequence[int], k: int) -> bool:
    for subset in range(1, 1 << k):
        s = 0
        rest = subset
        while rest:
            bit = rest & -rest
            rest ^= bit
            s += f[bit.bit_length() - 1]
        if s > table[subset]:
            return False
    return True


@lru_cache(maxsize=128)
def _hypertree_set(graph: BipartiteGraph, class_choice: str) -> frozenset[Vector]:
    return frozenset(enumerate_hypertrees(graph, class_choice))


def is_hypertree(graph: BipartiteGraph, class_choice: str, f: Sequence[int],
                 cap: int = SUBSET_CAP) -> bool:
    """Membership via the inequality system (full subset scan under the cap)."""
    hyper = hyperedge_labels(graph, class_choice)
    k = len(hyper)
    if k > cap:
        raise ValueError(f"size cap exceeded: {k} hyperedges > {cap}")
    f = tuple(f)
    if len(f) != k:
        raise ValueError(f"vector length {len(f)} != {k} hyperedges")
    total = len(vertex_labels(graph, class_choice)) - 1
    if any(v < 0 for v in f):  # implied by the rest, but checked anyway
        return False
    if sum(f) != total:
        return False
    return _satisfies_mu(f, _mu_table(graph, class_choice), k)


def can_transfer(graph: BipartiteGraph, class_choice: str, f: Sequence[int],
                 source: str, target: str) -> bool:
    """May one unit of valence move from `source` to `target` within the
    hypertree f so that another hypertree results?"""
    hyper = hyperedge_labels(graph, class_choice)
    h_index = {x: i for i, x in enumerate(hyper)}
    si, ti = h_index[source], h_index[target]
    if si == ti:
        raise ValueError("transfer endpoints must differ")
    f = tuple(f)
    if f[si] == 0:
        return False
    moved = list(f)
    moved[si] -= 1
    moved[ti] += 1
    return tuple(moved) in _hypertree_set(graph, class_choice)


def favorite(graph: BipartiteGraph, class_choice: str, order: Sequence[str] | None,
             f: Sequence[int], hyperedge: str) -> str:
    """The smallest hyperedge that can receive a transfer from `hyperedge`;
    the hyperedge itself when it is internally active.

    A hyperedge is internally active for f when no transfer from it to any
    smaller hyperedge yields a hypertree.
    """
    hyper = hyperedge_labels(graph, class_choice)
    order = tuple(order) if order is not None else hyper
    if sorted(order) != sorted(hyper):
        raise ValueError("order must be a permutation of the hyperedge class")
    candidates = [e for e in order
                  if e != hyperedge and can_transfer(graph, class_choice, f, hyperedge, e)]
    pos = {e: i for i, e in enumerate(order)}
    smaller = [e for e in candidates if pos[e] < pos[hyperedge]]
    if not smaller:
        return hyperedge
    return min(candidates, key=pos.__getitem__)


def realize(graph: BipartiteGraph, class_choice: str, f: Sequence[int]) -> SpanningTree:
    """First spanning tree (enumeration order) with valence f(e)+1 at each e."""
    f = tuple(f)
    for tree in enumerate_spanning_trees(graph):
        if tree_hypertree(graph, tree, class_choice) == f:
            return tree
    raise ValueError(f"{f} is not a hypertree of the {class_choice} class")


# ---------------------------------------------------------------------------
# generic submodular oracles


@dataclass(frozen=True)
class SubmodularOracle:
    """A monotone, submodular, integer-valued set function with value 0 at
    the empty set, on an ordered ground set."""

    ground: tuple[str, ...]
    fn: Callable[[frozenset[str]], int]

    def evaluate(self, subset: Iterable[str]) -> int:
        fs = frozenset(subset)
        unknown = fs - set(self.ground)
        if unknown:
            raise ValueError(f"labels outside ground set: {sorted(unknown)}")
        if not fs:
            return 0
        return self.fn(fs)

    @classmethod
    def from_bipartite(cls, graph: BipartiteGraph, class_choice: str) -> "SubmodularOracle":
        ground = hyperedge_labels(graph, class_choice)
        return cls(ground, lambda s: mu(graph, class_choice, s))

    def spot_check(self, rng: random.Random, trials: int = 50) -> None:
        """Assert monotonicity and submodularity on random subset pairs."""
        items = list(self.ground)
        if self.evaluate(()) != 0:
            raise AssertionError("oracle value at the empty set must be 0")
        for _ in range(trials):
            a = frozenset(x for x in items if rng.random() < 0.5)
            b = frozenset(x for x in items if rng.random() < 0.5)
            fa, fb = self.evaluate(a), self.evaluate(b)
            if a <= b and fa > fb:
                raise AssertionError(f"not monotone on {sorted(a)} <= {sorted(b)}")
            if fa + fb < self.evaluate(a | b) + self.evaluate(a & b):
                raise AssertionError(f"not submodular on {sorted(a)}, {sorted(b)}")


def base_points(oracle: SubmodularOracle, ground_cap: int = 10) -> set[Vector]:
    """Integer points of the base polytope: nonnegative x with full sum equal
    to mu(ground) and every partial sum bounded by mu of the subset.

    Enumerates the box bounded by singleton values with partial-sum pruning,
    then filters by the full subset system.
    """
    k = len(oracle.ground)
    if k > ground_cap:
        raise ValueError(f"ground set cap exceeded: {k} > {ground_cap}")
    labels = oracle.ground
    values: dict[int, int] = {}
    for mask in range(1 << k):
        values[mask] = oracle.evaluate(labels[i] for i in range(k) if mask >> i & 1)
    total = values[(1 << k) - 1]
    singles = [values[1 << i] for i in range(k)]
    prefix_masks = [(1 << (i + 1)) - 1 for i in range(k)]
    out: set[Vector] = set()

    def rec(i: int, so_far: int, prefix: list[int]) -> None:
        if i == k:
            if so_far == total:
                f = tuple(prefix)
                if all(sum(f[j] for j in range(k) if mask >> j & 1) <= values[mask]
                       for mask in range(1, 1 << k)):
                    out.add(f)
            return
        limit = min(singles[i], total - so_far, values[prefix_masks[i]] - so_far)
        for val in range(limit + 1):
            prefix.append(val)
            rec(i + 1, so_far + val, prefix)
            prefix.pop()

    rec(0, 0, [])
    return out
