"""Exact integer and rational helpers shared across the package."""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, Sequence


def binom(n: int, k: int) -> int:
    """Binomial coefficient that also accepts a negative upper argument.

    Uses the falling-factorial convention C(n, k) = n(n-1)...(n-k+1)/k!, so
    for example binom(-1, 2) == 1 and binom(3, 5) == 0.
    """
    if k < 0:
        return 0
    if n >= 0:
        return math.comb(n, k)
    num = 1
    for i in range(k):
        num *= n - i
    # k consecutive integers are divisible by k!, so this division is exact
    return num // math.factorial(k)


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Yield every tuple of `parts` nonnegative integers summing to `total`."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for cuts in combinations(range(total + parts - 1), parts - 1):
        prev = -1
        out = []
        for c in cuts:
            out.append(c - prev - 1)
            prev = c
        out.append(total + parts - 2 - prev)
        yield tuple(out)


def lagrange_value(values: Sequence[int], x: int | Fraction) -> Fraction:
    """Evaluate at `x` the unique polynomial p with deg p < len(values) and p(i) = values[i]."""
    n = len(values)
    total = Fraction(0)
    for i, yi in enumerate(values):
        term = Fraction(yi)
        for j in range(n):
            if j != i:
                term *= Fraction(x - j, i - j)
        total += term
    return total


def solve_exact(matrix: Sequence[Sequence[int]], rhs: Sequence[int]) -> list[Fraction]:
    """Solve a square integer linear system exactly over the rationals."""
    n = len(rhs)
    m = [[Fraction(matrix[i][j]) for j in range(n)] + [Fraction(rhs[i])] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            raise ValueError("singular system")
        m[col], m[pivot] = m[pivot], m[col]
        pv = m[col][col]
        m[col] = [v / pv for v in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                factor = m[r][col]
                m[r] = [a - factor * b for a, b in zip(m[r], m[col])]
    return [m[i][n] for i in range(n)]


def as_integers(values: Iterable[Fraction | int], context: str) -> list[int]:
    """Convert exact rationals to ints, raising if any value is non-integral."""
    out = []
    for v in values:
        f = Fraction(v)
        if f.denominator != 1:
            raise ValueError(f"{context}: non-integer value {f}")
        out.append(int(f))
    return out
