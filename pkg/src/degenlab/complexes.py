"""Pointwise two-term and three-term complexes.

A two-term complex restricted to a point is just a matrix s (n x m, the map
F^m -> F^n).  Cohomology labels follow the degeneracy-locus convention:
h0 is the cokernel dimension of s and h1 the kernel dimension, the unique
assignment under which the Fredholm relation h0 - h1 = n - m, the duality
relation for the transposed complex, and the corank description of the
stratification all hold at once.

A three-term point (a, b) with b a = 0 and a injective reduces to a
two-term complex by quotienting out the image of a.
"""

from __future__ import annotations

from .matrices import Matrix, Subspace, hstack, image, kernel


class InconsistentComplex(ValueError):
    """Raised when b a != 0 for a claimed three-term complex."""


class FirstMapNotInjective(ValueError):
    """Raised when the first map of a three-term point has a kernel."""


class ComplexPoint:
    """A Tor-amplitude [0,1] complex at a single point."""

    __slots__ = ("matrix",)

    def __init__(self, matrix: Matrix):
        self.matrix = matrix

    @property
    def m(self) -> int:
        return self.matrix.ncols

    @property
    def n(self) -> int:
        return self.matrix.nrows

    @property
    def rank_index(self) -> int:
        """The rank e = n - m of the complex (constant over a family)."""
        return self.n - self.m

    @property
    def h0(self) -> int:
        """Cokernel dimension, the degeneracy index at this point."""
        return self.n - self.matrix.rank()

    @property
    def h1(self) -> int:
        """Kernel dimension."""
        return self.m - self.matrix.rank()

    def shifted_dual(self) -> "ComplexPoint":
        """The complex with transposed matrix; swaps h0 and h1, negates e."""
        return ComplexPoint(self.matrix.transpose())

    def in_stratum(self, k: int) -> bool:
        """Whether this point lies in the locus with degeneracy index >= k."""
        return self.h0 >= k

    def __eq__(self, other) -> bool:
        return isinstance(other, ComplexPoint) and self.matrix == other.matrix

    def __repr__(self) -> str:
        return (f"ComplexPoint({self.n}x{self.m} over {self.matrix.field}, "
                f"h0={self.h0}, h1={self.h1})")


class ThreeTermPoint:
    """A three-term complex at a point: a into the middle space, b out of it.

    Shapes: a is mid x left, b is right x mid.  Validity (b a = 0, a of full
    column rank) is checked when cohomology is requested, and violations are
    reported rather than silently accepted.
    """

    __slots__ = ("a", "b")

    def __init__(self, a: Matrix, b: Matrix):
        if a.nrows != b.ncols:
            raise ValueError("middle dimensions of a and b differ")
        self.a = a
        self.b = b

    @property
    def middle_dim(self) -> int:
        return self.a.nrows

    def validate(self) -> None:
        if not (self.b @ self.a).is_zero():
            raise InconsistentComplex("composition b a is nonzero")
        if self.a.rank() != self.a.ncols:
            raise FirstMapNotInjective(
                "first map has a kernel, so the point is not Tor-amplitude [0,1]")

    def cohomology(self) -> tuple[int, int]:
        """(h0, h1) = (middle cohomology, cokernel of b)."""
        self.validate()
        h0 = (self.b.ncols - self.b.rank()) - self.a.rank()
        h1 = self.b.nrows - self.b.rank()
        return h0, h1

    @property
    def h0(self) -> int:
        return self.cohomology()[0]

    @property
    def h1(self) -> int:
        return self.cohomology()[1]

    @property
    def rank_index(self) -> int:
        return self.middle_dim - self.a.ncols - self.b.nrows

    def two_term_reduction(self) -> ComplexPoint:
        """Quotient out im(a) by explicit basis extension.

        Returns the two-term presentation oriented so that its h0/h1 labels
        coincide with this complex's h0/h1.
        """
        self.validate()
        field = self.a.field
        img = image(self.a)
        pivot_rows = set()
        for j in range(img.basis.ncols):
            for i in range(img.basis.nrows):
                if img.basis.rows[i][j] != field.zero:
                    pivot_rows.add(i)
                    break
        complement_cols = [i for i in range(self.middle_dim) if i not in pivot_rows]
        comp = Matrix.zeros(field, self.middle_dim, len(complement_cols))
        for k, i in enumerate(complement_cols):
            comp.rows[i][k] = field.one
        # Sanity: the chosen standard vectors complement im(a).
        if Subspace.span(hstack(img.basis, comp)).dim != self.middle_dim:
            raise RuntimeError("basis extension failed")
        return ComplexPoint((self.b @ comp).transpose())
