"""Dimension formulas, non-emptiness arithmetic and blow-up class calculus.

Everything here is exact integer or rational arithmetic; no geometry is
computed.  The blow-up calculus works in the degree-filtered cohomology of
a surface and its one-point blow-up, where the exceptional curve class C
has self-intersection -1 and the twisted pushforward is determined by four
displayed relations plus linearity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence


def expected_codim(k: int, e: int) -> int:
    """Expected codimension max(0, k(k-e)) of the k-th degeneracy locus.

    For k <= 0 the locus is everything (the degeneracy index is never
    negative), so the codimension is 0 even where the quadratic is positive.
    """
    if k <= 0:
        return 0
    return max(0, k * (k - e))


def vdim_inc(dim_x: int, e: int, d_plus: int, d_minus: int) -> int:
    """Virtual dimension of the incidence variety over a dim_x-dimensional base.

    For e = 1 this provably coincides with `d0_virtual_dimension`, which is
    asserted here; for other e the two candidates differ by (e-1)(d+ - d-)
    and callers report the discrepancy.
    """
    if e < 0:
        raise ValueError("requires e >= 0 (use the shifted dual)")
    value = dim_x - d_plus * (d_plus - e) + d_minus * (d_plus - d_minus - e)
    if e == 1:
        assert value == d0_virtual_dimension(dim_x, d_plus, d_minus)
    return value


def d0_virtual_dimension(dim_x: int, d_plus: int, d_minus: int) -> int:
    """The virtual-class degree d0 = dim X + (1-d+)d+ - (d-+1)d- + d-d+."""
    return dim_x + (1 - d_plus) * d_plus - (d_minus + 1) * d_minus + d_minus * d_plus


@dataclass(frozen=True)
class CriterionInput:
    """Inputs of the non-emptiness criterion for degeneracy loci."""

    const: int
    theta0: int
    r: int
    n: int
    l: int

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("r must be positive")
        if self.l < 0:
            raise ValueError("l must be nonnegative")


def criterion_value(c: CriterionInput) -> int:
    t = c.l % c.r
    return c.const + 2 * c.r * c.n + c.l * (c.r - c.l) - t * (c.r - t)


def criterion_nonempty(c: CriterionInput) -> bool:
    """const + 2rn + l(r-l) - t(r-t) >= theta0, with t = l mod r."""
    return criterion_value(c) >= c.theta0


def criterion_induction_check(const: int, r: int, m: int, l: int) -> bool:
    """Exact identity behind the induction step of the criterion.

    Both sides carry the same remainder term t(r-t) with t = l mod r, so
    the check reduces to the polynomial identity
    2r(m-l+r) + (l-r)(2r-l) = 2rm + l(r-l).
    """
    if l < r:
        raise ValueError("induction step needs l >= r")
    t = l % r
    lhs = const + 2 * r * (m - l + r) + (l - r) * (2 * r - l) - t * (r - t)
    rhs = const + 2 * r * m + l * (r - l) - t * (r - t)
    return lhs == rhs


_THETA_TABLE = {
    # kind: (theta0, theta); theta = theta0 + 2 absorbs the surface factor.
    "K3_generic": (0, 2),
    "abelian": (2, 4),
}


def theta_table(surface_kind: str, theta0: int | None = None) -> tuple[int, int]:
    """(theta0, theta) for the supported moduli settings.

    "framed_plane" returns (0, 0): the framed criterion is used without the
    +2 surface factor.  "custom" requires an explicit theta0.
    """
    if surface_kind == "framed_plane":
        return (0, 0)
    if surface_kind == "custom":
        if theta0 is None:
            raise ValueError("custom surface kind needs theta0")
        return (theta0, theta0 + 2)
    if surface_kind in _THETA_TABLE:
        return _THETA_TABLE[surface_kind]
    raise ValueError(f"unknown surface kind {surface_kind!r}")


class ExpectedDimensions(NamedTuple):
    r_scaled: int
    l_scaled: int
    discrepant: bool


def blowup_moduli_expected_dimension(const: int, r: int, n: int, l: int) -> ExpectedDimensions:
    """Two candidate expected dimensions for the blow-up moduli set.

    `r_scaled` is const + 2rn - r(l+r) as printed in the source formula;
    `l_scaled` is const + 2rn - l(l+r), the value obtained by substituting
    n1 = n, n2 = n - l into the quiver dimension formula.  They agree only
    for l = r; tangent-space experiments decide which candidate is right.
    """
    r_scaled = const + 2 * r * n - r * (l + r)
    l_scaled = const + 2 * r * n - l * (l + r)
    return ExpectedDimensions(r_scaled, l_scaled, r_scaled != l_scaled)


def quiver_moduli_dimension(n1: int, n2: int, r: int) -> int:
    """2 n1 n2 - n1^2 - n2^2 + (n1 + n2) r."""
    return 2 * n1 * n2 - n1 * n1 - n2 * n2 + (n1 + n2) * r


# -- blow-up class calculus ----------------------------------------------------

Gram = tuple[tuple[Fraction, ...], ...]


def make_gram(rows: Sequence[Sequence]) -> Gram:
    g = tuple(tuple(Fraction(x) for x in row) for row in rows)
    for i, row in enumerate(g):
        if len(row) != len(g):
            raise ValueError("Gram matrix must be square")
        for j in range(len(g)):
            if g[i][j] != g[j][i]:
                raise ValueError("Gram matrix must be symmetric")
    return g


@dataclass(frozen=True)
class SurfaceClass:
    """A class on the base surface: rank + divisor part + point part."""

    rank: Fraction
    divisor: tuple[Fraction, ...]
    point: Fraction

    @classmethod
    def make(cls, rank, divisor, point) -> "SurfaceClass":
        return cls(Fraction(rank), tuple(Fraction(x) for x in divisor), Fraction(point))

    def __add__(self, other: "SurfaceClass") -> "SurfaceClass":
        return SurfaceClass(self.rank + other.rank,
                            tuple(a + b for a, b in zip(self.divisor, other.divisor)),
                            self.point + other.point)

    def __sub__(self, other: "SurfaceClass") -> "SurfaceClass":
        return SurfaceClass(self.rank - other.rank,
                            tuple(a - b for a, b in zip(self.divisor, other.divisor)),
                            self.point - other.point)


@dataclass(frozen=True)
class BlowupClass:
    """A class on the blown-up surface.

    The divisor part splits as a pullback lattice vector plus a rational
    multiple of the exceptional curve [C]; the pairing uses the supplied
    Gram matrix on the pullback part and [C]^2 = -1, with the two pieces
    orthogonal.
    """

    rank: Fraction
    divisor: tuple[Fraction, ...]
    c_coeff: Fraction
    point: Fraction

    @classmethod
    def make(cls, rank, divisor, c_coeff, point) -> "BlowupClass":
        return cls(Fraction(rank), tuple(Fraction(x) for x in divisor),
                   Fraction(c_coeff), Fraction(point))

    def __add__(self, other: "BlowupClass") -> "BlowupClass":
        return BlowupClass(self.rank + other.rank,
                           tuple(a + b for a, b in zip(self.divisor, other.divisor)),
                           self.c_coeff + other.c_coeff, self.point + other.point)

    def __sub__(self, other: "BlowupClass") -> "BlowupClass":
        return BlowupClass(self.rank - other.rank,
                           tuple(a - b for a, b in zip(self.divisor, other.divisor)),
                           self.c_coeff - other.c_coeff, self.point - other.point)

    def scale(self, s) -> "BlowupClass":
        s = Fraction(s)
        return BlowupClass(self.rank * s, tuple(a * s for a in self.divisor),
                           self.c_coeff * s, self.point * s)


def divisor_pairing(a: Sequence[Fraction], b: Sequence[Fraction], gram: Gram) -> Fraction:
    if len(a) != len(gram) or len(b) != len(gram):
        raise ValueError("divisor length does not match the Gram matrix")
    total = Fraction(0)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    total += ai * gram[i][j] * bj
    return total


def blowup_pairing(x: BlowupClass, y: BlowupClass, gram: Gram) -> Fraction:
    return divisor_pairing(x.divisor, y.divisor, gram) - x.c_coeff * y.c_coeff


def p_star(c: SurfaceClass) -> BlowupClass:
    """Pullback to the blow-up (no exceptional component)."""
    return BlowupClass(c.rank, c.divisor, Fraction(0), c.point)


def p_shriek(c: BlowupClass) -> SurfaceClass:
    """Twisted pushforward, determined by linearity and the relations
    [whole space] -> [whole space], pullback divisor -> same divisor,
    [C] -> (1/2)[pt], [pt] -> [pt]."""
    return SurfaceClass(c.rank, c.divisor, c.point + c.c_coeff / 2)


def chern_character(r, c1: Sequence, n, gram: Gram) -> SurfaceClass:
    """r + c1 + (c1^2/2 - n)[pt] as a SurfaceClass."""
    c1 = tuple(Fraction(x) for x in c1)
    sq = divisor_pairing(c1, c1, gram)
    return SurfaceClass(Fraction(r), c1, sq / 2 - Fraction(n))


def exceptional_twist_class(lattice_rank: int) -> BlowupClass:
    """The class [C] - (1/2)[pt] of the degree -1 line bundle on C."""
    zeros = (Fraction(0),) * lattice_rank
    return BlowupClass(Fraction(0), zeros, Fraction(1), Fraction(-1, 2))


def blowup_chern_vector(ch: SurfaceClass, d) -> BlowupClass:
    """Pull back a surface Chern character and subtract d exceptional twists."""
    return p_star(ch) - exceptional_twist_class(len(ch.divisor)).scale(d)
