"""q-combinatorics and count polynomials.

Point counts of the strata studied here are polynomials in the field size
q.  Dimension is read off as the degree of the exact Lagrange interpolant
through counts at several primes, guarded by a held-out prime.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence


class BudgetExceeded(RuntimeError):
    """An exhaustive enumeration was refused; carries the required size."""

    def __init__(self, required: int, budget: int, what: str = "enumeration"):
        super().__init__(f"{what} needs {required} items, budget is {budget}")
        self.required = required
        self.budget = budget


def gaussian_binomial(l: int, d: int, q: int) -> int:
    """Number of d-dimensional subspaces of F_q^l.  Zero when d < 0 or d > l."""
    if d < 0 or d > l:
        return 0
    num = 1
    den = 1
    for i in range(d):
        num *= q ** (l - i) - 1
        den *= q ** (i + 1) - 1
    assert num % den == 0
    return num // den


def general_linear_order(n: int, q: int) -> int:
    """|GL_n(F_q)|."""
    out = 1
    for i in range(n):
        out *= q ** n - q ** i
    return out


def rank_count_formula(m: int, n: int, k: int, q: int) -> int:
    """Number of n x m matrices of rank k over F_q.

    Closed form: (subspace choices for the row space) times (injections of
    that k-space into F_q^n).  Validated against exhaustive enumeration
    before the laboratory trusts it at large q.
    """
    if k < 0 or k > min(m, n):
        raise ValueError(f"rank {k} out of range for {n}x{m}")
    out = gaussian_binomial(m, k, q)
    for i in range(k):
        out *= q ** n - q ** i
    return out


@dataclass
class CountTable:
    """Exact point counts per label for one family and field size."""

    family: str
    q: int
    counts: dict

    def total(self) -> int:
        return sum(self.counts.values())

    def merge(self, other: "CountTable") -> "CountTable":
        """Associative merge of partial tables (parallel enumeration)."""
        if (self.family, self.q) != (other.family, other.q):
            raise ValueError("cannot merge tables of different families")
        merged = dict(self.counts)
        for label, c in other.counts.items():
            merged[label] = merged.get(label, 0) + c
        return CountTable(self.family, self.q, merged)

    def to_jsonable(self) -> dict:
        return {"family": self.family, "q": self.q,
                "counts": {str(k): v for k, v in sorted(self.counts.items())}}

    def records(self) -> list[dict]:
        """One JSON record per label, sorted by label."""
        return [{"family": self.family, "q": self.q, "label": str(k), "count": v}
                for k, v in sorted(self.counts.items())]


class CountPolynomial:
    """Polynomial in q with rational coefficients through given support counts."""

    __slots__ = ("coeffs", "support")

    def __init__(self, coeffs: Sequence[Fraction], support: Sequence[tuple[int, int]]):
        trimmed = list(coeffs)
        while trimmed and trimmed[-1] == 0:
            trimmed.pop()
        self.coeffs = tuple(Fraction(c) for c in trimmed)
        self.support = tuple(support)

    @property
    def degree(self) -> int:
        """Degree of the interpolant; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading_coefficient(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def evaluate(self, q: int) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * q + c
        return acc

    def matches(self, q: int, count: int) -> bool:
        return self.evaluate(q) == count

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, CountPolynomial) and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append(f"{c}*q" if c != 1 else "q")
            else:
                parts.append(f"{c}*q^{i}" if c != 1 else f"q^{i}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_jsonable(self) -> dict:
        return {"coefficients": [str(c) for c in self.coeffs],
                "support": [list(pt) for pt in self.support],
                "degree": self.degree}


def fit_count_polynomial(points: Sequence[tuple[int, int]]) -> CountPolynomial:
    """Exact Lagrange interpolation through (q, count) support points.

    Needs at least two support points at pairwise distinct primes, and one
    more support point than the expected degree (caller's responsibility);
    a held-out prime should then be checked with `matches`.
    """
    if len(points) < 2:
        raise ValueError("need at least two support points")
    qs = [q for q, _ in points]
    if len(set(qs)) != len(qs):
        raise ValueError("support points must be at distinct primes")
    k = len(points)
    coeffs = [Fraction(0)] * k
    for qi, ci in points:
        # Basis polynomial prod_{j != i} (x - qj) / (qi - qj).
        basis = [Fraction(1)]
        denom = 1
        for qj, _ in points:
            if qj == qi:
                continue
            new = [Fraction(0)] * (len(basis) + 1)
            for deg, c in enumerate(basis):
                new[deg] += c * (-qj)
                new[deg + 1] += c
            basis = new
            denom *= qi - qj
        scale = Fraction(ci, denom)
        for deg, c in enumerate(basis):
            coeffs[deg] += scale * c
    return CountPolynomial(coeffs, points)


def fit_with_holdout(counts_by_q: Mapping[int, int], support_qs: Sequence[int],
                     holdout_q: int) -> tuple[CountPolynomial, bool]:
    """Fit on the support primes, then validate at the held-out prime."""
    poly = fit_count_polynomial([(q, counts_by_q[q]) for q in support_qs])
    ok = poly.matches(holdout_q, counts_by_q[holdout_q])
    return poly, ok
