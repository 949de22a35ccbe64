"""Dense one-variable polynomials with exact (arbitrary precision) integer coefficients."""

from __future__ import annotations

from typing import Iterable, Mapping


class Polynomial:
    """Immutable polynomial stored as an ascending tuple of integer coefficients.

    Trailing zeros are stripped on construction, so equal polynomials compare
    equal regardless of how they were produced.  The zero polynomial has an
    empty coefficient tuple and degree -1.  Evaluation accepts any value that
    supports arithmetic with ints (e.g. Fraction), so p(1) is always the exact
    coefficient sum.
    """

    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Iterable[int] = ()):
        coeffs = list(coefficients)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self.coefficients: tuple[int, ...] = tuple(coeffs)

    @classmethod
    def from_terms(cls, terms: Mapping[int, int]) -> "Polynomial":
        """Build from a {degree: coefficient} mapping."""
        if not terms:
            return cls()
        top = max(terms)
        return cls(terms.get(k, 0) for k in range(top + 1))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def coefficient(self, k: int) -> int:
        if 0 <= k < len(self.coefficients):
            return self.coefficients[k]
        return 0

    def __call__(self, x):
        total = 0
        for c in reversed(self.coefficients):
            total = total * x + c
        return total

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coefficients), len(other.coefficients))
        return Polynomial(self.coefficient(k) + other.coefficient(k) for k in range(n))

    def shift(self, k: int) -> "Polynomial":
        """Multiply by x**k."""
        return Polynomial((0,) * k + self.coefficients)

    def reversed_through(self, n: int) -> "Polynomial":
        """Return x**n * p(1/x); requires deg p <= n."""
        if self.degree > n:
            raise ValueError(f"cannot reverse degree {self.degree} polynomial through {n}")
        return Polynomial(self.coefficient(n - k) for k in range(n + 1))

    def __eq__(self, other) -> bool:
        return isinstance(other, Polynomial) and self.coefficients == other.coefficients

    def __hash__(self) -> int:
        return hash(self.coefficients)

    def __bool__(self) -> bool:
        return bool(self.coefficients)

    def to_str(self, var: str = "ξ") -> str:
        if not self.coefficients:
            return "0"
        parts = []
        for k, c in enumerate(self.coefficients):
            if c == 0:
                continue
            if k == 0:
                parts.append(str(c))
            else:
                mono = var if k == 1 else f"{var}^{k}"
                parts.append(mono if c == 1 else f"{c}{mono}")
        return " + ".join(parts)

    def __str__(self) -> str:
        return self.to_str()

    def __repr__(self) -> str:
        return f"Polynomial({self.coefficients!r})"


ONE = Polynomial((1,))
