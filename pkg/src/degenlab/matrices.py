"""Dense exact linear algebra over F_p and the rationals.

Matrices are stored row-major as lists of scalars (int residues or
Fraction).  Everything is computed by Gaussian elimination: first-nonzero
pivoting over a prime field, magnitude-based pivoting over the rationals to
keep entries small.  Subspaces are kept in a column-reduced canonical form,
so two subspaces are equal as sets exactly when their representations are
equal; the stability fixed-point iterations rely on this as a termination
test.

Zero-extent matrices (0 rows or 0 columns) are first-class citizens: quiver
data with an empty vertex produces them routinely.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .fields import Field, PrimeField, QQ, RationalField


class Matrix:
    """An immutable-by-convention dense matrix over an exact field."""

    __slots__ = ("field", "nrows", "ncols", "rows", "_rank", "_rref")

    def __init__(self, field: Field, rows: Sequence[Sequence], nrows: int | None = None,
                 ncols: int | None = None):
        if nrows is None:
            nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if nrows else 0
        norm = field.normalize
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        self.rows = [[norm(x) for x in row] for row in rows]
        for row in self.rows:
            if len(row) != ncols:
                raise ValueError("ragged rows")
        if len(self.rows) != nrows:
            raise ValueError("row count mismatch")
        self._rank: int | None = None
        self._rref: tuple[list[list], list[int]] | None = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> "Matrix":
        zero = field.zero
        return cls(field, [[zero] * ncols for _ in range(nrows)], nrows, ncols)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        zero, one = field.zero, field.one
        rows = [[one if i == j else zero for j in range(n)] for i in range(n)]
        return cls(field, rows, n, n)

    @classmethod
    def scalar(cls, field: Field, n: int, value) -> "Matrix":
        m = cls.zeros(field, n, n)
        v = field.normalize(value)
        for i in range(n):
            m.rows[i][i] = v
        return m

    @classmethod
    def unit(cls, field: Field, nrows: int, ncols: int, i: int, j: int) -> "Matrix":
        """Matrix with a single 1 at position (i, j)."""
        m = cls.zeros(field, nrows, ncols)
        m.rows[i][j] = field.one
        return m

    @classmethod
    def column(cls, field: Field, entries: Sequence) -> "Matrix":
        return cls(field, [[x] for x in entries], len(entries), 1)

    @classmethod
    def random(cls, field: Field, nrows: int, ncols: int, rng) -> "Matrix":
        return cls(field, [[field.random(rng) for _ in range(ncols)]
                           for _ in range(nrows)], nrows, ncols)

    # -- basics ------------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (isinstance(other, Matrix) and self.field == other.field
                and self.nrows == other.nrows and self.ncols == other.ncols
                and self.rows == other.rows)

    def __hash__(self):
        return hash(self.key())

    def key(self):
        """Hashable identity (field, shape, entries)."""
        return (self.field, self.nrows, self.ncols,
                tuple(tuple(row) for row in self.rows))

    def __repr__(self) -> str:
        return f"Matrix({self.field}, {self.nrows}x{self.ncols}, {self.rows})"

    def is_zero(self) -> bool:
        zero = self.field.zero
        return all(x == zero for row in self.rows for x in row)

    def entry(self, i: int, j: int):
        return self.rows[i][j]

    def col(self, j: int) -> list:
        return [row[j] for row in self.rows]

    def transpose(self) -> "Matrix":
        rows = [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)]
        return Matrix(self.field, rows, self.ncols, self.nrows)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.field != other.field:
            raise ValueError("field mismatch")
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.nrows}x{self.ncols} @ "
                             f"{other.nrows}x{other.ncols}")
        f = self.field
        out = Matrix.zeros(f, self.nrows, other.ncols)
        if isinstance(f, PrimeField):
            p = f.p
            for i in range(self.nrows):
                srow = self.rows[i]
                orow = out.rows[i]
                for k in range(self.ncols):
                    a = srow[k]
                    if a:
                        brow = other.rows[k]
                        for j in range(other.ncols):
                            orow[j] = (orow[j] + a * brow[j]) % p
        else:
            for i in range(self.nrows):
                srow = self.rows[i]
                orow = out.rows[i]
                for k in range(self.ncols):
                    a = srow[k]
                    if a:
                        brow = other.rows[k]
                        for j in range(other.ncols):
                            orow[j] = orow[j] + a * brow[j]
        return out

    def _zip(self, other: "Matrix", op) -> "Matrix":
        if (self.field, self.nrows, self.ncols) != (other.field, other.nrows, other.ncols):
            raise ValueError("shape or field mismatch")
        rows = [[op(a, b) for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.rows, other.rows)]
        return Matrix(self.field, rows, self.nrows, self.ncols)

    def __add__(self, other: "Matrix") -> "Matrix":
        return self._zip(other, self.field.add)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self._zip(other, self.field.sub)

    def __neg__(self) -> "Matrix":
        neg = self.field.neg
        return Matrix(self.field, [[neg(x) for x in row] for row in self.rows],
                      self.nrows, self.ncols)

    def scale(self, c) -> "Matrix":
        c = self.field.normalize(c)
        mul = self.field.mul
        return Matrix(self.field, [[mul(c, x) for x in row] for row in self.rows],
                      self.nrows, self.ncols)

    def select_columns(self, cols: Sequence[int]) -> "Matrix":
        rows = [[row[j] for j in cols] for row in self.rows]
        return Matrix(self.field, rows, self.nrows, len(cols))

    # -- elimination -------------------------------------------------------

    def rref(self) -> tuple["Matrix", list[int]]:
        """Row-reduced echelon form and the list of pivot columns."""
        rows, pivots = self._rref_rows()
        return Matrix(self.field, rows, self.nrows, self.ncols), list(pivots)

    def _rref_rows(self) -> tuple[list[list], list[int]]:
        if self._rref is None:
            work = [row[:] for row in self.rows]
            if isinstance(self.field, PrimeField):
                pivots = _rref_mod_p(work, self.ncols, self.field.p)
            else:
                pivots = _rref_rational(work, self.ncols)
            self._rref = (work, pivots)
            self._rank = len(pivots)
        return self._rref

    def rank(self) -> int:
        if self._rank is None:
            self._rref_rows()
        return self._rank

    def to_jsonable(self) -> dict:
        if isinstance(self.field, PrimeField):
            entries = [[int(x) for x in row] for row in self.rows]
        else:
            entries = [[str(x) for x in row] for row in self.rows]
        return {"field": repr(self.field), "rows": self.nrows,
                "cols": self.ncols, "entries": entries}


def _rref_mod_p(rows: list[list[int]], ncols: int, p: int) -> list[int]:
    """In-place RREF over F_p with first-nonzero pivoting; returns pivot cols."""
    nrows = len(rows)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = -1
        for i in range(r, nrows):
            if rows[i][c] % p:
                pivot_row = i
                break
        if pivot_row < 0:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = pow(rows[r][c], -1, p)
        if inv != 1:
            rows[r] = [(x * inv) % p for x in rows[r]]
        prow = rows[r]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return pivots


def _rref_rational(rows: list[list[Fraction]], ncols: int) -> list[int]:
    """In-place RREF over Q; pivot by largest magnitude to limit entry growth."""
    nrows = len(rows)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = -1
        best = None
        for i in range(r, nrows):
            v = rows[i][c]
            if v != 0:
                mag = abs(v)
                if best is None or mag > best:
                    best = mag
                    pivot_row = i
        if pivot_row < 0:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = 1 / rows[r][c]
        if inv != 1:
            rows[r] = [x * inv for x in rows[r]]
        prow = rows[r]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return pivots


# -- stacking ---------------------------------------------------------------

def vstack(*mats: Matrix) -> Matrix:
    """Stack matrices vertically (same column count)."""
    field = mats[0].field
    ncols = mats[0].ncols
    rows: list[list] = []
    for m in mats:
        if m.field != field or m.ncols != ncols:
            raise ValueError("vstack mismatch")
        rows.extend(row[:] for row in m.rows)
    return Matrix(field, rows, sum(m.nrows for m in mats), ncols)


def hstack(*mats: Matrix) -> Matrix:
    """Stack matrices horizontally (same row count)."""
    field = mats[0].field
    nrows = mats[0].nrows
    for m in mats:
        if m.field != field or m.nrows != nrows:
            raise ValueError("hstack mismatch")
    rows = [sum((m.rows[i] for m in mats), []) for i in range(nrows)]
    return Matrix(field, rows, nrows, sum(m.ncols for m in mats))


def block_diag(*mats: Matrix) -> Matrix:
    field = mats[0].field
    nrows = sum(m.nrows for m in mats)
    ncols = sum(m.ncols for m in mats)
    out = Matrix.zeros(field, nrows, ncols)
    r0 = c0 = 0
    for m in mats:
        for i in range(m.nrows):
            out.rows[r0 + i][c0:c0 + m.ncols] = m.rows[i][:]
        r0 += m.nrows
        c0 += m.ncols
    return out


# -- subspaces ---------------------------------------------------------------

class Subspace:
    """A subspace of F^ambient in column-reduced canonical form.

    The basis matrix is ambient x dim; its transpose is in RREF with pivots
    in increasing order, which makes the representation unique.  Set
    equality is therefore representation equality.
    """

    __slots__ = ("field", "ambient_dim", "basis")

    def __init__(self, field: Field, ambient_dim: int, basis: Matrix):
        self.field = field
        self.ambient_dim = ambient_dim
        self.basis = basis

    @classmethod
    def span(cls, columns: Matrix) -> "Subspace":
        """Canonical subspace spanned by the columns of the given matrix."""
        reduced, pivots = columns.transpose().rref()
        basis_rows = [reduced.rows[i] for i in range(len(pivots))]
        basis = Matrix(columns.field, basis_rows, len(pivots), columns.nrows).transpose()
        return cls(columns.field, columns.nrows, basis)

    @classmethod
    def zero(cls, field: Field, ambient_dim: int) -> "Subspace":
        return cls(field, ambient_dim, Matrix.zeros(field, ambient_dim, 0))

    @classmethod
    def full(cls, field: Field, ambient_dim: int) -> "Subspace":
        return cls(field, ambient_dim, Matrix.identity(field, ambient_dim))

    @property
    def dim(self) -> int:
        return self.basis.ncols

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subspace) and self.field == other.field
                and self.ambient_dim == other.ambient_dim
                and self.basis == other.basis)

    def __hash__(self):
        return hash(self.basis.key())

    def __repr__(self) -> str:
        return f"Subspace(dim {self.dim} of F^{self.ambient_dim})"

    def contains_vector(self, column: Matrix) -> bool:
        if column.nrows != self.ambient_dim or column.ncols != 1:
            raise ValueError("ambient dimension mismatch")
        joint = Subspace.span(hstack(self.basis, column))
        return joint.dim == self.dim

    def contains(self, other: "Subspace") -> bool:
        if other.ambient_dim != self.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        return subspace_sum(self, other).dim == self.dim


def kernel(m: Matrix) -> Subspace:
    """The kernel {v : Mv = 0}, dimension ncols - rank."""
    reduced, pivots = m.rref()
    field = m.field
    pivot_set = set(pivots)
    free = [j for j in range(m.ncols) if j not in pivot_set]
    neg = field.neg
    cols = Matrix.zeros(field, m.ncols, len(free))
    for k, f in enumerate(free):
        cols.rows[f][k] = field.one
        for i, pc in enumerate(pivots):
            cols.rows[pc][k] = neg(reduced.rows[i][f])
    return Subspace.span(cols)


def image(m: Matrix) -> Subspace:
    """The column space, dimension rank."""
    return Subspace.span(m)


def intersect(u: Subspace, v: Subspace) -> Subspace:
    """U intersect V inside the shared ambient space."""
    if u.ambient_dim != v.ambient_dim or u.field != v.field:
        raise ValueError("ambient dimension mismatch")
    if u.dim == 0 or v.dim == 0:
        return Subspace.zero(u.field, u.ambient_dim)
    joint = hstack(u.basis, v.basis)
    ker = kernel(joint)
    # Kernel vectors (a; b) satisfy U a = -V b, so U a ranges over U cap V.
    a_part = Matrix(u.field, ker.basis.rows[:u.dim], u.dim, ker.basis.ncols)
    return Subspace.span(u.basis @ a_part)


def subspace_sum(u: Subspace, v: Subspace) -> Subspace:
    if u.ambient_dim != v.ambient_dim or u.field != v.field:
        raise ValueError("ambient dimension mismatch")
    return Subspace.span(hstack(u.basis, v.basis))


def preimage(m: Matrix, u: Subspace) -> Subspace:
    """The subspace {v : Mv in U} of the domain of M."""
    if u.ambient_dim != m.nrows or u.field != m.field:
        raise ValueError("ambient dimension mismatch")
    if u.dim == 0:
        return kernel(m)
    joint = hstack(m, u.basis)
    ker = kernel(joint)
    v_part = Matrix(m.field, ker.basis.rows[:m.ncols], m.ncols, ker.basis.ncols)
    return Subspace.span(v_part)


def rank_factorization(m: Matrix) -> tuple[Matrix, Matrix]:
    """Write M = A B with inner dimension exactly rank(M).

    A is the pivot columns of M, B the nonzero rows of the RREF; the product
    reproduces M exactly.
    """
    reduced, pivots = m.rref()
    k = len(pivots)
    a = m.select_columns(pivots)
    b = Matrix(m.field, [reduced.rows[i] for i in range(k)], k, m.ncols)
    return a, b


def solve_matrix(a: Matrix, target: Matrix) -> Matrix | None:
    """One X with A X = target, or None if some column is inconsistent."""
    if a.nrows != target.nrows or a.field != target.field:
        raise ValueError("shape mismatch")
    aug = hstack(a, target)
    reduced, pivots = aug.rref()
    if any(pc >= a.ncols for pc in pivots):
        return None
    x = Matrix.zeros(a.field, a.ncols, target.ncols)
    for i, pc in enumerate(pivots):
        x.rows[pc] = reduced.rows[i][a.ncols:]
    return x


def invert(m: Matrix) -> Matrix | None:
    if m.nrows != m.ncols:
        raise ValueError("only square matrices can be inverted")
    if m.rank() != m.nrows:
        return None
    return solve_matrix(m, Matrix.identity(m.field, m.nrows))


def random_invertible(field: Field, n: int, rng) -> Matrix:
    while True:
        m = Matrix.random(field, n, n, rng)
        if m.rank() == n:
            return m


# -- enumeration -------------------------------------------------------------

def iter_matrices(field: PrimeField, nrows: int, ncols: int) -> Iterator[Matrix]:
    """All nrows x ncols matrices over F_p, row-major odometer order."""
    if not isinstance(field, PrimeField):
        raise ValueError("exhaustive enumeration needs a finite field")
    import itertools
    count = nrows * ncols
    for flat in itertools.product(range(field.p), repeat=count):
        rows = [list(flat[i * ncols:(i + 1) * ncols]) for i in range(nrows)]
        yield Matrix(field, rows, nrows, ncols)


def iter_entry_tuples(q: int, count: int,
                      index_range: tuple[int, int] | None = None) -> Iterator[tuple[int, ...]]:
    """Entry tuples of the odometer, optionally restricted to an index range.

    The range form exists so enumerations can be partitioned across workers
    and merged deterministically.
    """
    import itertools
    if index_range is None:
        yield from itertools.product(range(q), repeat=count)
        return
    lo, hi = index_range
    hi = min(hi, q ** count)
    for idx in range(lo, hi):
        digits = []
        x = idx
        for _ in range(count):
            digits.append(x % q)
            x //= q
        yield tuple(reversed(digits))
