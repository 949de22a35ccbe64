"""Activities and the interior/exterior polynomials.

The interior polynomial is the generating function of internal inactivity
over hypertrees.  It can be computed a second, independent way: counting
lattice points of the hypertree polytope plus a growing inverted simplex and
rewriting those counts in a binomial basis.  The exterior polynomial is
defined here operationally by the analogous counts with the standard simplex.

Orders on the hyperedge class are explicit label permutations; vectors stay
indexed by the graph's label order throughout.
"""

from __future__ import annotations

import random
from typing import Iterable, Sequence

from . import hypertree as ht
from .bigraph import BipartiteGraph, OrdinaryGraph, incidence_bipartite, require_connected
from .polynomial import Polynomial
from .util import as_integers, binom, compositions, solve_exact

Vector = tuple[int, ...]


def _order_indices(graph: BipartiteGraph, class_choice: str,
                   order: Sequence[str] | None) -> tuple[int, ...]:
    labels = ht.hyperedge_labels(graph, class_choice)
    if order is None:
        return tuple(range(len(labels)))
    order = tuple(order)
    if sorted(order) != sorted(labels):
        raise ValueError("order must be a permutation of the hyperedge class")
    index = {x: i for i, x in enumerate(labels)}
    return tuple(index[x] for x in order)


def lex_less(f1: Sequence[int], f2: Sequence[int],
             order: Sequence[int] | None = None) -> bool:
    """Hypertree order: f1 precedes f2 when, at the first position (along
    `order`, default natural) where they differ, f1 is LARGER.

    The inversion is deliberate: vectors with fixed coordinate sum are
    compared by how much weight they push onto early hyperedges.
    """
    if len(f1) != len(f2):
        raise ValueError("vectors must have equal length")
    positions = range(len(f1)) if order is None else order
    for i in positions:
        if f1[i] != f2[i]:
            return f1[i] > f2[i]
    return False


def is_internally_active(graph: BipartiteGraph, class_choice: str,
                         order: Sequence[str] | None, f: Sequence[int],
                         hyperedge: str) -> bool:
    """No transfer from `hyperedge` to any smaller hyperedge yields a hypertree."""
    labels = ht.hyperedge_labels(graph, class_choice)
    ordered = tuple(order) if order is not None else labels
    for smaller in ordered:
        if smaller == hyperedge:
            return True
        if ht.can_transfer(graph, class_choice, f, hyperedge, smaller):
            return False
    raise ValueError(f"{hyperedge!r} not in the {class_choice} class")


def inactive_hyperedges(graph: BipartiteGraph, class_choice: str,
                        order: Sequence[str] | None, f: Sequence[int]) -> tuple[str, ...]:
    labels = ht.hyperedge_labels(graph, class_choice)
    ordered = tuple(order) if order is not None else labels
    return tuple(e for e in ordered
                 if not is_internally_active(graph, class_choice, ordered, f, e))


def internal_inactivity(graph: BipartiteGraph, class_choice: str,
                        order: Sequence[str] | None, f: Sequence[int]) -> int:
    """Number of internally inactive hyperedges of the hypertree f."""
    return len(inactive_hyperedges(graph, class_choice, order, f))


def interior_polynomial(graph: BipartiteGraph, class_choice: str = "emerald",
                        order: Sequence[str] | None = None) -> Polynomial:
    """Generating function of internal inactivity over all hypertrees.

    Independent of the chosen order; the constant term is always 1 and the
    degree is at most min(|emerald|, |violet|) - 1.
    """
    require_connected(graph)
    counts: dict[int, int] = {}
    for f in ht.enumerate_hypertrees(graph, class_choice):
        k = internal_inactivity(graph, class_choice, order, f)
        counts[k] = counts.get(k, 0) + 1
    return Polynomial.from_terms(counts)


# ---------------------------------------------------------------------------
# Minkowski-sum lattice counts


def minkowski_lattice_count(points: Iterable[Vector], k: int,
                            direction: str = "inverted") -> int:
    """Distinct lattice points of the point set plus k times a simplex.

    `inverted` subtracts nonnegative integer vectors with coordinate sum k,
    `standard` adds them.  Exact because both summands are base polytopes of
    integer polymatroids, so every lattice point of the sum decomposes.
    """
    pts = list(points)
    if k < 0:
        raise ValueError("k must be nonnegative")
    if direction not in ("inverted", "standard"):
        raise ValueError(f"unknown direction {direction!r}")
    if not pts:
        return 0
    n = len(pts[0])
    sign = -1 if direction == "inverted" else 1
    seen: set[Vector] = set()
    for v in compositions(k, n):
        for b in pts:
            seen.add(tuple(x + sign * y for x, y in zip(b, v)))
    return len(seen)


def polynomial_from_mink_counts(counts: Sequence[int], n: int) -> Polynomial:
    """Coefficients a_j with counts[k] = sum_j a_j * C(k + n-1-j, n-1-j).

    Solved exactly over the rationals; a non-integer solution means the input
    counts did not come from a polymatroid and raises ValueError.
    """
    if len(counts) != n:
        raise ValueError(f"need exactly {n} counts, got {len(counts)}")
    matrix = [[binom(k + n - 1 - j, n - 1 - j) for j in range(n)] for k in range(n)]
    coeffs = as_integers(solve_exact(matrix, counts), "binomial basis solve")
    return Polynomial(coeffs)


def _mink_polynomial(graph: BipartiteGraph, class_choice: str, direction: str) -> Polynomial:
    require_connected(graph)
    base = ht.enumerate_hypertrees(graph, class_choice)
    n = len(ht.hyperedge_labels(graph, class_choice))
    counts = [minkowski_lattice_count(base, k, direction) for k in range(n)]
    return polynomial_from_mink_counts(counts, n)


def exterior_polynomial(graph: BipartiteGraph, class_choice: str = "emerald") -> Polynomial:
    """The companion invariant, read off standard-simplex Minkowski counts.
    Its value at 1 is the number of hypertrees."""
    poly = _mink_polynomial(graph, class_choice, "standard")
    assert poly(1) == len(ht.enumerate_hypertrees(graph, class_choice))
    return poly


def interior_polynomial_via_mink(graph: BipartiteGraph,
                                 class_choice: str = "emerald") -> Polynomial:
    """Interior polynomial recovered from inverted-simplex counts; must agree
    with the activity route for every order."""
    return _mink_polynomial(graph, class_choice, "inverted")


def partition_class(graph: BipartiteGraph, class_choice: str,
                    order: Sequence[str] | None, k: int, u: Sequence[int]) -> Vector:
    """The smallest hypertree (in the inverted lexicographic order) whose
    inverted-simplex cell of size k contains the lattice point u.

    The fibers of this map partition the Minkowski sum: each hypertree f
    collects exactly the points f - v where v is supported on the internally
    active hyperedges of f.
    """
    u = tuple(u)
    order_idx = _order_indices(graph, class_choice, order)
    candidates = []
    for f in ht.enumerate_hypertrees(graph, class_choice):
        if all(x <= y for x, y in zip(u, f)) and sum(y - x for x, y in zip(u, f)) == k:
            candidates.append(f)
    if not candidates:
        raise ValueError(f"{u} is not in the Minkowski sum for k={k}")
    best = candidates[0]
    for f in candidates[1:]:
        if lex_less(f, best, order_idx):
            best = f
    return best


def partition_fibers(graph: BipartiteGraph, class_choice: str,
                     order: Sequence[str] | None, k: int) -> dict[Vector, set[Vector]]:
    """Group every lattice point of the inverted Minkowski sum by its class."""
    base = ht.enumerate_hypertrees(graph, class_choice)
    n = len(base[0]) if base else 0
    fibers: dict[Vector, set[Vector]] = {f: set() for f in base}
    seen: set[Vector] = set()
    for v in compositions(k, n):
        for b in base:
            u = tuple(x - y for x, y in zip(b, v))
            if u not in seen:
                seen.add(u)
                fibers[partition_class(graph, class_choice, order, k, u)].add(u)
    return fibers


# ---------------------------------------------------------------------------
# the classical specialization via vertex activities


def vertex_activity_tutte(graph: OrdinaryGraph,
                          vertex_order: Sequence[str] | None = None) -> Polynomial:
    """T(x,1) of an ordinary graph computed from activities of its vertices.

    Subdivide every edge, treat the original vertices as hyperedges of the
    resulting bipartite graph, enumerate the hypertrees, and sum
    x^(activity - 1).  Agrees with the edge-based oracles.
    """
    if not graph.is_connected:
        raise ValueError("graph must be connected")
    big = incidence_bipartite(graph)
    order = tuple(vertex_order) if vertex_order is not None else graph.vertices
    counts: dict[int, int] = {}
    n = len(graph.vertices)
    for f in ht.enumerate_hypertrees(big, "emerald"):
        active = n - internal_inactivity(big, "emerald", order, f)
        counts[active - 1] = counts.get(active - 1, 0) + 1
    return Polynomial.from_terms(counts)


def random_orders(graph: BipartiteGraph, class_choice: str, count: int,
                  seed: int = 0) -> list[tuple[str, ...]]:
    """Seeded random hyperedge orders, for order-independence checks."""
    labels = list(ht.hyperedge_labels(graph, class_choice))
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        perm = labels[:]
        rng.shuffle(perm)
        out.append(tuple(perm))
    return out
