"""Triangulations of the root polytope as families of spanning trees.

A triangulation is a pairwise-compatible set of spanning trees whose
simplices tile the polytope.  Because all maximal simplices share one volume,
a pairwise-compatible family tiles exactly when it reaches the certified
member count, which equals the number of hypertrees; the backtracking builder
therefore searches for a family of that size, using the fact that members
induce pairwise distinct hypertrees on both color classes.  All geometry is
reduced to combinatorics: faces are forests, boundary membership is read off
minimal directed cuts, and the feeler exit rule is the first edge of a
transfer path.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from . import hypertree as ht
from .activity import inactive_hyperedges, is_internally_active
from .bigraph import (BipartiteGraph, Edge, SpanningTree,
                      alternating_cycle_exists, enumerate_spanning_trees,
                      minimal_directed_cuts, require_connected)
from .polynomial import Polynomial
from .util import binom

Forest = frozenset[Edge]


@dataclass(frozen=True)
class Triangulation:
    """A validated triangulation; members are stored in a canonical order.

    `seed` and `strategy` record how the object was built and are excluded
    from equality, so two builds agree exactly when their member sets do.
    """

    graph: BipartiteGraph
    members: tuple[SpanningTree, ...]
    strategy: str = field(compare=False, default="backtrack")
    seed: int | None = field(compare=False, default=None)

    def __len__(self) -> int:
        return len(self.members)

    def member_for(self, class_choice: str, f: Sequence[int]) -> SpanningTree:
        """The unique member inducing the hypertree f (marker bijection)."""
        f = tuple(f)
        for m in self.members:
            if ht.tree_hypertree(self.graph, m, class_choice) == f:
                return m
        raise ValueError(f"no member induces {f}")

    def to_record(self) -> dict:
        return {
            "strategy": self.strategy,
            "seed": self.seed,
            "members": [[list(e) for e in m.sort_key()] for m in self.members],
        }


@dataclass(frozen=True)
class FaceVector:
    """Face counts of a triangulation.

    `f[l]` counts l-dimensional simplices (forests with l+1 edges contained
    in a member); `f_interior[l]` counts those not lying on the boundary; `h`
    is f(x-1) under the convention that the count vector is padded with a
    leading 1 for the empty face.
    """

    f: tuple[int, ...]
    f_interior: tuple[int, ...]
    h: Polynomial


def _canonical_members(members: Iterable[SpanningTree]) -> tuple[SpanningTree, ...]:
    return tuple(sorted(members, key=SpanningTree.sort_key))


def build_triangulation(graph: BipartiteGraph, strategy: str = "backtrack",
                        seed: int = 0) -> Triangulation:
    """Build and validate a triangulation.

    `backtrack` runs a seeded depth-first search over spanning trees, keeping
    pairwise compatibility and one member per hypertree on each side, until
    the certified member count is reached.  `staircase` takes all non-crossing
    spanning trees of a complete bipartite graph in the two-line drawing given
    by the class orders.
    """
    require_connected(graph)
    if strategy == "backtrack":
        tri = _backtrack_triangulation(graph, seed)
    elif strategy == "staircase":
        tri = _staircase_triangulation(graph, seed)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    validate_triangulation(tri)
    return tri


def _backtrack_triangulation(graph: BipartiteGraph, seed: int) -> Triangulation:
    trees = enumerate_spanning_trees(graph)
    b_em = ht.enumerate_hypertrees(graph, "emerald")
    b_vi = ht.enumerate_hypertrees(graph, "violet")
    if len(b_em) != len(b_vi):
        raise RuntimeError("hypertree counts of the two classes disagree")
    target = len(b_em)
    em_of = [ht.tree_hypertree(graph, t, "emerald") for t in trees]
    vi_of = [ht.tree_hypertree(graph, t, "violet") for t in trees]
    groups: dict[tuple[int, ...], list[int]] = {f: [] for f in b_em}
    for i, f in enumerate(em_of):
        groups[f].append(i)
    rng = random.Random(seed)
    group_list = sorted(groups.values(), key=lambda g: (len(g), em_of[g[0]]))
    for g in group_list:
        rng.shuffle(g)

    compat: dict[tuple[int, int], bool] = {}

    def compatible(i: int, j: int) -> bool:
        key = (i, j) if i < j else (j, i)
        hit = compat.get(key)
        if hit is None:
            hit = not alternating_cycle_exists(graph, trees[i], trees[j])
            compat[key] = hit
        return hit

    chosen: list[int] = []
    used_violet: set[tuple[int, ...]] = set()
    budget = [10_000_000]

    def rec(gi: int) -> bool:
        if gi == target:
            return True
        for ti in group_list[gi]:
            budget[0] -= 1
            if budget[0] < 0:
                raise RuntimeError("triangulation search budget exhausted")
            if vi_of[ti] in used_violet:
                continue
            if all(compatible(ti, cj) for cj in chosen):
                chosen.append(ti)
                used_violet.add(vi_of[ti])
                if rec(gi + 1):
                    return True
                chosen.pop()
                used_violet.discard(vi_of[ti])
        return False

    if not rec(0):
        raise RuntimeError(
            "search exhausted without reaching the certified member count")
    members = _canonical_members(trees[i] for i in chosen)
    return Triangulation(graph, members, "backtrack", seed)


def _staircase_triangulation(graph: BipartiteGraph, seed: int) -> Triangulation:
    ne, nv = len(graph.emerald), len(graph.violet)
    if len(graph.edges) != ne * nv:
        raise ValueError("staircase strategy needs a complete bipartite graph")
    e_pos = {x: i for i, x in enumerate(graph.emerald)}
    v_pos = {x: i for i, x in enumerate(graph.violet)}

    def non_crossing(tree: SpanningTree) -> bool:
        coords = [(e_pos[e], v_pos[v]) for e, v in tree.edges]
        for (a, b), (c, d) in combinations(coords, 2):
            if (a - c) * (b - d) < 0:
                return False
        return True

    members = [t for t in enumerate_spanning_trees(graph) if non_crossing(t)]
    return Triangulation(graph, _canonical_members(members), "staircase", seed)


def validate_triangulation(tri: Triangulation) -> None:
    """Raise unless the member family is pairwise compatible, has the
    certified count, and induces each hypertree of each class exactly once."""
    graph = tri.graph
    b_em = set(ht.enumerate_hypertrees(graph, "emerald"))
    b_vi = set(ht.enumerate_hypertrees(graph, "violet"))
    if len(tri.members) != len(b_em) or len(b_em) != len(b_vi):
        raise ValueError(
            f"expected {len(b_em)} members, got {len(tri.members)}")
    for t1, t2 in combinations(tri.members, 2):
        if alternating_cycle_exists(graph, t1, t2):
            raise ValueError("members are not pairwise compatible")
    em_seen = [ht.tree_hypertree(graph, m, "emerald") for m in tri.members]
    vi_seen = [ht.tree_hypertree(graph, m, "violet") for m in tri.members]
    if len(set(em_seen)) != len(em_seen) or set(em_seen) != b_em:
        raise ValueError("emerald marker hypertrees are not a bijection")
    if len(set(vi_seen)) != len(vi_seen) or set(vi_seen) != b_vi:
        raise ValueError("violet marker hypertrees are not a bijection")


# ---------------------------------------------------------------------------
# faces, f- and h-vectors


def faces(tri: Triangulation) -> set[Forest]:
    """Every nonempty forest contained in at least one member."""
    out: set[Forest] = set()
    for m in tri.members:
        edges = sorted(m.edges)
        for r in range(1, len(edges) + 1):
            for sub in combinations(edges, r):
                out.add(frozenset(sub))
    return out


def is_interior_face(graph: BipartiteGraph, forest: Iterable[Edge]) -> bool:
    """A face lies on the boundary exactly when it avoids some minimal
    directed cut; interior faces meet them all."""
    fs = frozenset(forest)
    return all(fs & cut.edges for cut in minimal_directed_cuts(graph))


def face_vectors(tri: Triangulation) -> FaceVector:
    graph = tri.graph
    d = graph.n_vertices - 2
    f = [0] * (d + 1)
    f_int = [0] * (d + 1)
    for face in faces(tri):
        l = len(face) - 1
        f[l] += 1
        if is_interior_face(graph, face):
            f_int[l] += 1
    # h(x) = f(x-1) with the leading term for the empty face included
    h = [0] * (d + 2)
    for i in range(d + 2):
        h[i] += binom(d + 1, i) * (-1) ** (d + 1 - i)
    for l in range(d + 1):
        for i in range(d - l + 1):
            h[i] += f[l] * binom(d - l, i) * (-1) ** (d - l - i)
    if h[0] != 0:
        raise ValueError("h(0) != 0: member family does not tile the polytope")
    return FaceVector(tuple(f), tuple(f_int), Polynomial(h))


# ---------------------------------------------------------------------------
# markers


def marker_hypertrees(tri: Triangulation) -> dict[SpanningTree, tuple[tuple[int, ...], tuple[int, ...]]]:
    """Each member's induced (emerald, violet) hypertree pair; the two
    projections are bijections onto the respective hypertree sets."""
    out = {}
    for m in tri.members:
        out[m] = (ht.tree_hypertree(tri.graph, m, "emerald"),
                  ht.tree_hypertree(tri.graph, m, "violet"))
    for side in (0, 1):
        seen = [pair[side] for pair in out.values()]
        if len(set(seen)) != len(seen):
            raise ValueError("duplicate induced hypertree among members")
    return out


def marker_weights(graph: BipartiteGraph, tree: SpanningTree) -> dict[Edge, Fraction]:
    """Barycentric weights of the emerald marker on the tree's edges.

    For each violet vertex, the emerald class splits by the tree edge through
    which it is reached; the edge weight is that part's size over the emerald
    class size.  Weights at each violet vertex sum to 1, and at an emerald
    vertex e they sum to f(e) + 1/|emerald|.
    """
    adj: dict[str, list[Edge]] = {}
    for e, v in tree.edges:
        adj.setdefault(e, []).append((e, v))
        adj.setdefault(v, []).append((e, v))
    total = len(graph.emerald)
    emerald_set = set(graph.emerald)
    weights: dict[Edge, Fraction] = {}
    for v in graph.violet:
        for edge in adj.get(v, []):
            e = edge[0]
            # emeralds reachable from e without passing through v
            seen = {e, v}
            stack = [e]
            count = 0
            while stack:
                x = stack.pop()
                if x in emerald_set:
                    count += 1
                for e2, v2 in adj.get(x, []):
                    for y in (e2, v2):
                        if y not in seen:
                            seen.add(y)
                            stack.append(y)
            weights[edge] = Fraction(count, total)
    return weights


# ---------------------------------------------------------------------------
# arborescence selection and the sigma map


def _forest_components(forest: Forest) -> list[set[str]]:
    adj: dict[str, set[str]] = {}
    for e, v in forest:
        adj.setdefault(e, set()).add(v)
        adj.setdefault(v, set()).add(e)
    comps = []
    seen: set[str] = set()
    for start in sorted(adj):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        comps.append(comp)
    return comps


def arborescence_tree(tri: Triangulation, forest: Iterable[Edge],
                      component: str) -> SpanningTree:
    """The unique member containing the interior face `forest` whose extra
    edges all have their violet endpoint on the side of the component of
    `forest` containing the vertex `component`."""
    fs = frozenset(tuple(e) for e in forest)
    comp = next((c for c in _forest_components(fs) if component in c), None)
    if comp is None:
        raise ValueError(f"vertex {component!r} is not covered by the forest")
    violet_set = set(tri.graph.violet)
    matches = []
    for m in tri.members:
        if not fs <= m.edges:
            continue
        if all(_facing_endpoint(m, edge, comp) in violet_set
               for edge in m.edges - fs):
            matches.append(m)
    if not matches:
        raise ValueError("no qualifying member: the face is not interior "
                         "or the inputs violate the preconditions")
    if len(matches) > 1:
        raise ValueError("multiple qualifying members; invalid triangulation")
    return matches[0]


def _facing_endpoint(tree: SpanningTree, edge: Edge, component: set[str]) -> str:
    """Endpoint of `edge` on the side (of the tree minus the edge) containing
    the given component."""
    adj: dict[str, list[str]] = {}
    for e, v in tree.edges:
        if (e, v) == edge:
            continue
        adj.setdefault(e, []).append(v)
        adj.setdefault(v, []).append(e)
    e_end, v_end = edge
    seen = {e_end}
    stack = [e_end]
    while stack:
        x = stack.pop()
        for y in adj.get(x, []):
            if y not in seen:
                seen.add(y)
                stack.append(y)
    anchor = next(iter(component))
    return e_end if anchor in seen else v_end


def _tree_path(tree: SpanningTree, start: str, goal: str) -> list[str]:
    adj: dict[str, list[str]] = {}
    for e, v in sorted(tree.edges):
        adj.setdefault(e, []).append(v)
        adj.setdefault(v, []).append(e)
    prev: dict[str, str] = {start: start}
    stack = [start]
    while stack:
        x = stack.pop()
        if x == goal:
            break
        for y in adj.get(x, []):
            if y not in prev:
                prev[y] = x
                stack.append(y)
    if goal not in prev:
        raise ValueError(f"no path from {start!r} to {goal!r}")
    path = [goal]
    while path[-1] != start:
        path.append(prev[path[-1]])
    path.reverse()
    return path


def sigma_map(tri: Triangulation, order: Sequence[str] | None,
              f: Sequence[int], inactive_set: Iterable[str],
              class_choice: str = "emerald") -> Forest:
    """Image of the pair (hypertree, set of inactive hyperedges).

    Take the member inducing f; for each chosen hyperedge drop the first edge
    on the tree path toward its favorite.  The result is an interior face of
    codimension |set|, and over all pairs with a fixed set size this map is a
    bijection onto the interior faces of that codimension.
    """
    f = tuple(f)
    chosen = tuple(inactive_set)
    graph = tri.graph
    for e in chosen:
        if is_internally_active(graph, class_choice, order, f, e):
            raise ValueError(f"hyperedge {e!r} is internally active for {f}")
    member = tri.member_for(class_choice, f)
    removals = set()
    for e in chosen:
        fav = ht.favorite(graph, class_choice, order, f, e)
        path = _tree_path(member, e, fav)
        removals.add((path[0], path[1]) if class_choice == "emerald"
                     else (path[1], path[0]))
    if len(removals) != len(chosen):
        raise RuntimeError("removed edges are not distinct")
    return frozenset(member.edges - removals)


def verify_sigma_bijection(tri: Triangulation, order: Sequence[str] | None,
                           k: int, class_choice: str = "emerald") -> bool:
    """Check that the sigma map restricted to k-element inactive sets is
    injective with image exactly the interior codimension-k faces."""
    graph = tri.graph
    n = graph.n_vertices
    pairs = []
    for f in ht.enumerate_hypertrees(graph, class_choice):
        inactive = inactive_hyperedges(graph, class_choice, order, f)
        for s in combinations(inactive, k):
            pairs.append((f, s))
    images = {sigma_map(tri, order, f, s, class_choice) for f, s in pairs}
    if len(images) != len(pairs):
        return False
    wanted_size = n - 1 - k
    interior = {face for face in faces(tri)
                if len(face) == wanted_size and is_interior_face(graph, face)}
    return images == interior


# ---------------------------------------------------------------------------
# shellings


def _attachment(new_edges: frozenset[Edge],
                prior: Sequence[frozenset[Edge]]) -> int | None:
    """Number of facets along which a new simplex attaches to the prior
    union, or None when the intersection is not a union of facets."""
    inters = [new_edges & p for p in prior]
    full = len(new_edges) - 1
    removed = {next(iter(new_edges - a)) for a in inters if len(a) == full}
    for a in inters:
        if a and not any(eps not in a for eps in removed):
            return None
    if prior and not removed:
        return None
    return len(removed)


def find_shelling(tri: Triangulation, exhaustive_cap: int = 10,
                  seed: int = 0) -> tuple[tuple[SpanningTree, ...], tuple[int, ...]] | None:
    """Search for a shelling order; exhaustive search up to the cap, seeded
    greedy beyond.  Returns (ordered members, attachment counts) or None;
    absence of a shelling is a legitimate outcome, not an error.
    """
    members = list(tri.members)
    edge_sets = [m.edges for m in members]
    count = len(members)

    result: list[tuple[list[int], list[int]]] = []

    if count <= exhaustive_cap:
        def rec(prefix: list[int], cs: list[int]) -> bool:
            if len(prefix) == count:
                result.append((prefix[:], cs[:]))
                return True
            prior = [edge_sets[i] for i in prefix]
            for i in range(count):
                if i in prefix:
                    continue
                c = _attachment(edge_sets[i], prior)
                if c is None or (prefix and c < 1):
                    continue
                prefix.append(i)
                cs.append(c)
                if rec(prefix, cs):
                    return True
                prefix.pop()
                cs.pop()
            return False

        rec([], [])
    else:
        rng = random.Random(seed)
        for _ in range(20):
            pool = list(range(count))
            rng.shuffle(pool)
            prefix: list[int] = []
            cs: list[int] = []
            while pool:
                pick = None
                prior = [edge_sets[i] for i in prefix]
                for i in pool:
                    c = _attachment(edge_sets[i], prior)
                    if c is not None and (not prefix or c >= 1):
                        pick = (i, c)
                        break
                if pick is None:
                    break
                prefix.append(pick[0])
                cs.append(pick[1])
                pool.remove(pick[0])
            if len(prefix) == count:
                result.append((prefix, cs))
                break

    if not result:
        return None
    order, cs = result[0]
    d = tri.graph.n_vertices - 2
    from_shelling = Polynomial.from_terms(
        {deg: sum(1 for c in cs if d + 1 - c == deg) for deg in set(d + 1 - c for c in cs)})
    if from_shelling != face_vectors(tri).h:
        raise RuntimeError("shelling order found but the h identity failed")
    return tuple(members[i] for i in order), tuple(cs)
