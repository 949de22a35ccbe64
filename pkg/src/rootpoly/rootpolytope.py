"""The root polytope of a bipartite graph.

Vertices are the 0/1 indicator sums of edges; the facet description comes
from minimal directed cuts.  Lattice points of dilations are generated by
iterated Minkowski sums of the vertex set (every dilated unimodular simplex
is covered by nonnegative integer combinations of its vertices), with an
independent facet-based scan as a cross-check.  Ehrhart values are always
obtained by counting, never by volume formulas; coefficients in the shifted
binomial basis come from an exact triangular solve, and evaluation at
negative arguments uses exact Lagrange interpolation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .bigraph import (BipartiteGraph, first_betti, minimal_directed_cuts,
                      require_connected, vertex_indices)
from .util import binom, compositions, lagrange_value

Point = tuple[int, ...]

SCAN_VERTEX_CAP = 12
SCAN_DILATION_CAP = 6
_PACK_BITS = 5  # packed coordinates must stay below 2**_PACK_BITS


@dataclass(frozen=True)
class EhrhartData:
    """Lattice-count polynomial data for the root polytope.

    `d` is the polytope dimension, `epsilon` the counts at dilations 0..d,
    and `a` the coefficients in the basis C(s + d - k, d).
    """

    d: int
    epsilon: tuple[int, ...]
    a: tuple[int, ...]

    def to_record(self) -> dict:
        return {"d": self.d, "epsilon_values": list(self.epsilon),
                "a_coefficients": list(self.a)}


def vertices(graph: BipartiteGraph) -> list[Point]:
    """One 0/1 point per edge, in emerald-then-violet coordinate order."""
    idx = vertex_indices(graph)
    n = graph.n_vertices
    out = []
    for e, v in graph.edges:
        p = [0] * n
        p[idx[e]] = 1
        p[idx[v]] = 1
        out.append(tuple(p))
    return out


def contains(graph: BipartiteGraph, point: Sequence[int], s: int) -> bool:
    """Is the point in the s-fold dilation?  Both class sums must equal s and
    every minimal directed cut functional must be nonnegative."""
    ne = len(graph.emerald)
    point = tuple(point)
    if sum(point[:ne]) != s or sum(point[ne:]) != s:
        return False
    return all(cut.value(graph, point) >= 0 for cut in minimal_directed_cuts(graph))


def _pack_key(point: Sequence[int]) -> int:
    key = 0
    for i, x in enumerate(point):
        key |= int(x) << (_PACK_BITS * i)
    return key


def _unpack(keys: np.ndarray, n: int) -> np.ndarray:
    cols = [(keys >> (_PACK_BITS * i)) & ((1 << _PACK_BITS) - 1) for i in range(n)]
    return np.stack(cols, axis=1).astype(np.int64)


@lru_cache(maxsize=6)
def _packed_layers(graph: BipartiteGraph, s_max: int) -> tuple[np.ndarray, ...]:
    """Lattice points of each dilation 0..s_max as sorted packed-int64 arrays.

    Coordinates of points in the s-fold dilation lie in [0, s], so they pack
    into 5-bit fields whenever s_max < 32 and the graph has at most 12
    vertices; larger inputs take the (slower) tuple-set route.
    """
    n = graph.n_vertices
    vkeys = np.array(sorted(_pack_key(p) for p in vertices(graph)), dtype=np.int64)
    layers = [np.zeros(1, dtype=np.int64)]
    for _ in range(s_max):
        prev = layers[-1]
        sums = (prev[:, None] + vkeys[None, :]).ravel()
        layers.append(np.unique(sums))
    return tuple(layers)


@lru_cache(maxsize=6)
def _tuple_layers(graph: BipartiteGraph, s_max: int) -> tuple[frozenset[Point], ...]:
    verts = vertices(graph)
    layers: list[frozenset[Point]] = [frozenset({(0,) * graph.n_vertices})]
    for _ in range(s_max):
        nxt = {tuple(a + b for a, b in zip(p, v)) for p in layers[-1] for v in verts}
        layers.append(frozenset(nxt))
    return tuple(layers)


def _use_packed(graph: BipartiteGraph, s_max: int) -> bool:
    return graph.n_vertices * _PACK_BITS <= 63 and s_max < (1 << _PACK_BITS)


def lattice_points(graph: BipartiteGraph, s: int) -> set[Point]:
    """All lattice points of the s-fold dilation, by iterated Minkowski sums
    of the vertex set."""
    require_connected(graph)
    if s < 0:
        raise ValueError("dilation must be nonnegative")
    if _use_packed(graph, s):
        keys = _packed_layers(graph, s)[s]
        return {tuple(int(x) for x in row) for row in _unpack(keys, graph.n_vertices)}
    return set(_tuple_layers(graph, s)[s])


def lattice_count(graph: BipartiteGraph, s: int) -> int:
    require_connected(graph)
    if _use_packed(graph, s):
        return int(_packed_layers(graph, s)[s].size)
    return len(_tuple_layers(graph, s)[s])


def lattice_points_by_scan(graph: BipartiteGraph, s: int) -> set[Point]:
    """Independent oracle: enumerate nonnegative class-sum compositions and
    filter by the facet functionals.  Capped because it is a full scan."""
    require_connected(graph)
    if graph.n_vertices > SCAN_VERTEX_CAP or s > SCAN_DILATION_CAP:
        raise ValueError("scan oracle cap exceeded")
    cuts = minimal_directed_cuts(graph)
    weights = [cut.weights(graph) for cut in cuts]
    ne = len(graph.emerald)
    nv = len(graph.violet)
    out: set[Point] = set()
    for left in compositions(s, ne):
        for right in compositions(s, nv):
            p = left + right
            if all(sum(w * x for w, x in zip(wt, p)) >= 0 for wt in weights):
                out.add(p)
    return out


def ehrhart_coefficients(graph: BipartiteGraph) -> EhrhartData:
    """Counts at dilations 0..d and the coefficients a_k with
    count(s) = sum_k a_k C(s + d - k, d), solved triangularly (only the k=0
    basis polynomial survives at s=0, then induction)."""
    require_connected(graph)
    d = graph.n_vertices - 2
    eps = [lattice_count(graph, s) for s in range(d + 1)]
    a: list[int] = []
    for m in range(d + 1):
        val = eps[m] - sum(a[k] * binom(m + d - k, d) for k in range(m))
        a.append(val)
    # check the expansion reproduces every count
    for s in range(d + 1):
        total = sum(a[k] * binom(s + d - k, d) for k in range(d + 1))
        if total != eps[s]:
            raise ValueError("internal inconsistency in the Ehrhart solve")
    return EhrhartData(d, tuple(eps), tuple(a))


def interior_count(graph: BipartiteGraph, s: int) -> int:
    """Lattice points of the s-fold dilation with every minimal-cut
    functional strictly positive."""
    require_connected(graph)
    if s < 1:
        raise ValueError("interior counts need s >= 1")
    cuts = minimal_directed_cuts(graph)
    n = graph.n_vertices
    if _use_packed(graph, s):
        keys = _packed_layers(graph, s)[s]
        pts = _unpack(keys, n)
        w = np.array([cut.weights(graph) for cut in cuts], dtype=np.int64)
        strict = np.all(pts @ w.T > 0, axis=1)
        return int(np.count_nonzero(strict))
    pts = _tuple_layers(graph, s)[s]
    return sum(1 for p in pts
               if all(cut.value(graph, p) > 0 for cut in cuts))


def ehrhart_at(graph: BipartiteGraph, s: int) -> int:
    """Exact value of the count polynomial at any integer (via interpolation
    on the d+1 computed values when s is outside 0..d)."""
    data = ehrhart_coefficients(graph)
    if 0 <= s <= data.d:
        return data.epsilon[s]
    value = lagrange_value(data.epsilon, s)
    if value.denominator != 1:
        raise ValueError("interpolation produced a non-integer value")
    return int(value)


def reciprocity_check(graph: BipartiteGraph, s_max: int) -> bool:
    """Does interior_count(s) equal (-1)^d * count(-s) for s = 1..s_max?"""
    require_connected(graph)
    d = graph.n_vertices - 2
    sign = -1 if d % 2 else 1
    for s in range(1, s_max + 1):
        if interior_count(graph, s) != sign * ehrhart_at(graph, -s):
            return False
    return True


def ehrhart_b1_consistent(graph: BipartiteGraph) -> bool:
    """a_0 = 1 and a_1 = first Betti number (a_1 taken as 0 when d = 0)."""
    data = ehrhart_coefficients(graph)
    a1 = data.a[1] if data.d >= 1 else 0
    return data.a[0] == 1 and a1 == first_betti(graph)
