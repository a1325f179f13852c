"""Framed quiver data on the plane: solutions, stability, witnesses.

A datum is (X, Y, i, j) with X, Y: V -> V, i: W -> V, j: V -> W, subject to
[X, Y] + i j = 0 and the co-stability condition: no nonzero subspace of
ker(j) is invariant under both X and Y.  The pointwise universal complex is

    V --(X - x, Y - y, j)--> V + V + W --(-(Y - y), X - x, i)--> V.

Sign convention: the first block of the second map is negated, because the
unnegated arrangement composes to -2[X, Y] under the defining equation; the
negated form composes to exactly [X, Y] + i j, hence to zero on solutions.
This choice is recorded in every serialized witness.

For r = 1 the stable data with i = 0 are co-cyclic: monomial staircase
quotients give explicit witnesses whose degeneracy index at the origin is
the number of generators of the corresponding monomial ideal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .counting import BudgetExceeded
from .complexes import ThreeTermPoint
from .fields import Field, GF, PrimeField
from .matrices import (Matrix, Subspace, block_diag, hstack, intersect,
                       iter_entry_tuples, kernel, preimage, random_invertible,
                       rank_factorization, vstack)
from .rng import SplitRng

SIGN_CONVENTION = "second map = (-(Y - y), X - x, i); composes to [X,Y] + ij"


@dataclass(frozen=True)
class Partition:
    """A partition: weakly decreasing positive parts."""

    parts: tuple[int, ...]

    def __post_init__(self):
        if any(p <= 0 for p in self.parts):
            raise ValueError("parts must be positive")
        if any(self.parts[k] < self.parts[k + 1] for k in range(len(self.parts) - 1)):
            raise ValueError("parts must be weakly decreasing")

    @property
    def size(self) -> int:
        return sum(self.parts)

    def distinct_part_count(self) -> int:
        return len(set(self.parts))

    def cells(self) -> list[tuple[int, int]]:
        """Staircase cells (a, b) for the monomials x^a y^b below the profile."""
        return [(a, b) for b, part in enumerate(self.parts) for a in range(part)]


def partitions_of(n: int, max_part: int | None = None) -> Iterator[Partition]:
    """All partitions of n, largest first part first."""
    if n == 0:
        yield Partition(())
        return
    if max_part is None or max_part > n:
        max_part = n
    for first in range(max_part, 0, -1):
        for rest in partitions_of(n - first, first):
            yield Partition((first,) + rest.parts)


def generator_count_oracle(p: Partition) -> int:
    """Minimal generator count of the staircase monomial ideal.

    Outer corners of the staircase are one per distinct part size, plus the
    corner on the axis: distinct parts + 1.
    """
    return p.distinct_part_count() + 1


def max_generator_count(n: int) -> int:
    """floor((1 + sqrt(1 + 8n)) / 2): max generators over partitions of n."""
    import math
    return int((1 + math.isqrt(1 + 8 * n)) // 2)


@dataclass
class ADHMDatum:
    """(X, Y, i, j) on vector spaces of dimensions (n, r)."""

    n: int
    r: int
    X: Matrix
    Y: Matrix
    i: Matrix
    j: Matrix

    def __post_init__(self):
        f = self.X.field
        shapes = ((self.X, self.n, self.n), (self.Y, self.n, self.n),
                  (self.i, self.n, self.r), (self.j, self.r, self.n))
        for mat, rows, cols in shapes:
            if mat.field != f or (mat.nrows, mat.ncols) != (rows, cols):
                raise ValueError("component shape or field mismatch")

    @property
    def field(self) -> Field:
        return self.X.field

    def residual(self) -> Matrix:
        """XY - YX + ij; zero exactly on solutions."""
        return self.X @ self.Y - self.Y @ self.X + self.i @ self.j

    def is_solution(self) -> bool:
        return self.residual().is_zero()

    def is_stable(self) -> bool:
        """Co-stability: the largest (X, Y)-invariant subspace of ker j is zero.

        Decreasing fixed-point iteration K <- K meet X^-1 K meet Y^-1 K from
        K = ker j; dimensions strictly decrease until stable, so at most n
        steps run.
        """
        k = kernel(self.j)
        while True:
            nxt = intersect(k, intersect(preimage(self.X, k), preimage(self.Y, k)))
            if nxt == k:
                return k.dim == 0
            k = nxt

    def universal_complex_at(self, x, y) -> ThreeTermPoint:
        """The pointwise complex at (x, y); refused off the solution locus."""
        if not self.is_solution():
            raise ValueError("universal complex requires residual zero")
        f = self.field
        xid = Matrix.scalar(f, self.n, x)
        yid = Matrix.scalar(f, self.n, y)
        a = vstack(self.X - xid, self.Y - yid, self.j)
        b = hstack(-(self.Y - yid), self.X - xid, self.i)
        return ThreeTermPoint(a, b)

    def degeneracy_index_at(self, x, y) -> int:
        return self.universal_complex_at(x, y).h0

    def tangent_dimension(self) -> int:
        """Kernel dimension of the linearized equation minus dim GL(V).

        Meaningful at stable solutions, where the group acts freely; refused
        elsewhere.
        """
        if not self.is_solution():
            raise ValueError("tangent space is computed at solutions only")
        if not self.is_stable():
            raise ValueError("tangent dimension formula needs a stable point")
        f = self.field
        n, r = self.n, self.r
        cols: list[list] = []

        def push(block_rows, block_cols, build):
            for a in range(block_rows):
                for b in range(block_cols):
                    e = Matrix.unit(f, block_rows, block_cols, a, b)
                    val = build(e)
                    cols.append([val.rows[s][t] for s in range(n) for t in range(n)])

        push(n, n, lambda e: e @ self.Y - self.Y @ e)          # dX
        push(n, n, lambda e: self.X @ e - e @ self.X)          # dY
        push(n, r, lambda e: e @ self.j)                       # di
        push(r, n, lambda e: self.i @ e)                       # dj
        system = Matrix(f, cols, len(cols), n * n).transpose()
        kernel_dim = system.ncols - system.rank()
        return kernel_dim - n * n

    def gauge(self, g: Matrix) -> "ADHMDatum":
        """Conjugate by g in GL(V); preserves solutions and stability."""
        from .matrices import invert
        ginv = invert(g)
        if ginv is None:
            raise ValueError("gauge transform must be invertible")
        return ADHMDatum(self.n, self.r, g @ self.X @ ginv, g @ self.Y @ ginv,
                         g @ self.i, self.j @ ginv)

    def translate(self, x, y) -> "ADHMDatum":
        """Shift (X, Y) by scalars; commutators and stability are unchanged."""
        f = self.field
        return ADHMDatum(self.n, self.r,
                         self.X + Matrix.scalar(f, self.n, x),
                         self.Y + Matrix.scalar(f, self.n, y), self.i, self.j)

    def to_jsonable(self) -> dict:
        return {"n": self.n, "r": self.r, "field": repr(self.field),
                "X": self.X.to_jsonable()["entries"],
                "Y": self.Y.to_jsonable()["entries"],
                "i": self.i.to_jsonable()["entries"],
                "j": self.j.to_jsonable()["entries"],
                "sign_convention": SIGN_CONVENTION}


def empty_datum(field: Field, r: int) -> ADHMDatum:
    """The n = 0 datum (trivial rank-r object; degeneracy index r everywhere)."""
    return ADHMDatum(0, r, Matrix.zeros(field, 0, 0), Matrix.zeros(field, 0, 0),
                     Matrix.zeros(field, 0, r), Matrix.zeros(field, r, 0))


def direct_sum(d1: ADHMDatum, d2: ADHMDatum) -> ADHMDatum:
    """Block-diagonal sum; r adds.  Stability of the sum is not promised and
    must be re-checked by the caller."""
    if d1.field != d2.field:
        raise ValueError("field mismatch")
    return ADHMDatum(d1.n + d2.n, d1.r + d2.r,
                     block_diag(d1.X, d2.X), block_diag(d1.Y, d2.Y),
                     block_diag(d1.i, d2.i), block_diag(d1.j, d2.j))


def partition_witness(p: Partition, field: Field = GF(101)) -> ADHMDatum:
    """The co-cyclic r = 1 datum of a staircase monomial quotient.

    X and Y are the transposes of multiplication by x and y on the staircase
    monomial basis, i = 0, and j is the coordinate-of-1 covector (the
    transpose of the cyclic vector), matching the co-stability convention.
    """
    cells = p.cells()
    n = len(cells)
    index = {cell: k for k, cell in enumerate(cells)}
    mult_x = Matrix.zeros(field, n, n)
    mult_y = Matrix.zeros(field, n, n)
    one = field.one
    for (a, b), k in index.items():
        if (a + 1, b) in index:
            mult_x.rows[index[(a + 1, b)]][k] = one
        if (a, b + 1) in index:
            mult_y.rows[index[(a, b + 1)]][k] = one
    i = Matrix.zeros(field, n, 1)
    j = Matrix.zeros(field, 1, n)
    if n:
        j.rows[0][index[(0, 0)]] = one
    return ADHMDatum(n, 1, mult_x.transpose(), mult_y.transpose(), i, j)


# -- samplers -----------------------------------------------------------------

@dataclass
class SampleResult:
    datum: ADHMDatum | None
    attempts: int
    strategy: str

    @property
    def found(self) -> bool:
        return self.datum is not None


def _matrix_polynomial(x: Matrix, coeffs: list) -> Matrix:
    f = x.field
    acc = Matrix.zeros(f, x.nrows, x.nrows)
    power = Matrix.identity(f, x.nrows)
    for c in coeffs:
        acc = acc + power.scale(c)
        power = power @ x
    return acc


def _pad_factorization(c: Matrix, r: int, rng: SplitRng) -> tuple[Matrix, Matrix]:
    """Write c = i j with i of width exactly r.

    The extra columns of i are zero, so the matching extra rows of j are
    free; they are drawn at random to keep j generic (co-stability needs a
    large-kernel-free j far more often than a zero-padded one provides).
    """
    a, b = rank_factorization(c)
    k = a.ncols
    if k > r:
        raise ValueError("matrix rank exceeds the framing rank")
    if k == r:
        return a, b
    f = c.field
    i = hstack(a, Matrix.zeros(f, c.nrows, r - k))
    j = vstack(b, Matrix.random(f, r - k, c.ncols, rng))
    return i, j


def sample_stable(n: int, r: int, rng: SplitRng, field: Field = GF(101),
                  strategy: str | None = None, max_attempts: int = 1000,
                  tiny_budget: int = 1 << 20) -> SampleResult:
    """Draw a stable solution, or report exhaustion with the attempt count."""
    if strategy is None:
        strategy = "partition" if r == 1 else "low_rank_commutator"

    if n == 0:
        return SampleResult(empty_datum(field, r), 1, strategy)

    if strategy == "partition":
        if r != 1:
            raise ValueError("partition strategy is for r = 1")
        plist = list(partitions_of(n))
        for attempt in range(1, max_attempts + 1):
            sub = rng.child("partition", attempt)
            datum = partition_witness(plist[sub.randbelow(len(plist))], field)
            datum = datum.gauge(random_invertible(field, n, sub))
            datum = datum.translate(field.random(sub), field.random(sub))
            if datum.is_solution() and datum.is_stable():
                return SampleResult(datum, attempt, strategy)
        return SampleResult(None, max_attempts, strategy)

    if strategy == "low_rank_commutator":
        s = r // 2
        for attempt in range(1, max_attempts + 1):
            sub = rng.child("lrc", attempt)
            x = Matrix.random(field, n, n, sub)
            coeffs = [field.random(sub) for _ in range(n)]
            y = _matrix_polynomial(x, coeffs)
            if s > 0:
                u = Matrix.random(field, n, s, sub)
                v = Matrix.random(field, s, n, sub)
                y = y + u @ v
            commutator = x @ y - y @ x
            try:
                i, j = _pad_factorization(-commutator, r, sub)
            except ValueError:
                continue
            datum = ADHMDatum(n, r, x, y, i, j)
            if datum.is_solution() and datum.is_stable():
                return SampleResult(datum, attempt, strategy)
        return SampleResult(None, max_attempts, strategy)

    if strategy == "direct_sum":
        if r < 2:
            raise ValueError("direct_sum strategy needs r >= 2")
        for attempt in range(1, max_attempts + 1):
            sub = rng.child("dsum", attempt)
            n1 = sub.randbelow(n + 1)
            r1 = 1 + sub.randbelow(r - 1)
            left = sample_stable(n1, r1, sub.child("left"), field,
                                 max_attempts=20)
            right = sample_stable(n - n1, r - r1, sub.child("right"), field,
                                  max_attempts=20)
            if not (left.found and right.found):
                continue
            datum = direct_sum(left.datum, right.datum)
            if datum.is_solution() and datum.is_stable():
                return SampleResult(datum, attempt, strategy)
        return SampleResult(None, max_attempts, strategy)

    if strategy == "exhaustive_tiny":
        if not isinstance(field, PrimeField):
            raise ValueError("exhaustive strategy needs a finite field")
        found, attempts = None, 0
        for datum in iter_adhm_data(field, n, r, tiny_budget):
            attempts += 1
            if datum.is_solution() and datum.is_stable():
                found = datum
                break
        return SampleResult(found, attempts, strategy)

    raise ValueError(f"unknown strategy {strategy!r}")


def iter_adhm_data(field: PrimeField, n: int, r: int,
                   budget: int = 1 << 20) -> Iterator[ADHMDatum]:
    """Odometer over all data (X, Y, i, j) over a tiny field, budget-checked."""
    entries = 2 * n * n + 2 * n * r
    size = field.p ** entries
    if size > budget:
        raise BudgetExceeded(size, budget, f"ADHM enumeration (n={n}, r={r})")
    nn = n * n
    nr = n * r
    for flat in iter_entry_tuples(field.p, entries):
        x = Matrix(field, [list(flat[k * n:(k + 1) * n]) for k in range(n)], n, n)
        y = Matrix(field, [list(flat[nn + k * n:nn + (k + 1) * n]) for k in range(n)], n, n)
        ioff = 2 * nn
        i = Matrix(field, [list(flat[ioff + k * r:ioff + (k + 1) * r]) for k in range(n)], n, r)
        joff = 2 * nn + nr
        j = Matrix(field, [list(flat[joff + k * n:joff + (k + 1) * n]) for k in range(r)], r, n)
        yield ADHMDatum(n, r, x, y, i, j)


def enumerate_stable_solutions(field: PrimeField, n: int, r: int,
                               budget: int = 1 << 20,
                               cap: int | None = None) -> list[ADHMDatum]:
    out = []
    for datum in iter_adhm_data(field, n, r, budget):
        if datum.is_solution() and datum.is_stable():
            out.append(datum)
            if cap is not None and len(out) >= cap:
                break
    return out


# -- witness search -----------------------------------------------------------

@dataclass
class WitnessSearch:
    r: int
    n: int
    l: int
    witness: ADHMDatum | None
    h0: int | None
    phase: str | None
    trace: dict

    @property
    def found(self) -> bool:
        return self.witness is not None

    def to_jsonable(self) -> dict:
        return {"r": self.r, "n": self.n, "l": self.l, "found": self.found,
                "h0": self.h0, "phase": self.phase, "trace": self.trace,
                "witness": self.witness.to_jsonable() if self.found else None}


def _partition_tuples(total: int, count: int) -> Iterator[tuple[Partition, ...]]:
    if count == 0:
        if total == 0:
            yield ()
        return
    for first_size in range(total, -1, -1):
        for first in partitions_of(first_size):
            for rest in _partition_tuples(total - first_size, count - 1):
                yield (first,) + rest


def degeneracy_witness_search(r: int, n: int, l: int, rng: SplitRng,
                              field: Field = GF(101),
                              random_attempts: int = 10_000,
                              tiny_budget: int = 1 << 16) -> WitnessSearch:
    """Look for a stable solution whose degeneracy index at the origin is >= l.

    Phases: structured witnesses (direct sums of staircase data, one summand
    per framing unit), then randomized sampling, then an exhaustive odometer
    over F_2 when in budget.  Exhaustion is an outcome, not an error; the
    trace records how far each phase went.
    """
    trace: dict = {"structured_tried": 0, "random_attempts": 0,
                   "exhaustive_scanned": 0, "random_budget": random_attempts}

    def finish(datum, phase):
        h0 = datum.degeneracy_index_at(field.zero, field.zero)
        return WitnessSearch(r, n, l, datum, h0, phase, trace)

    for tup in _partition_tuples(n, r):
        trace["structured_tried"] += 1
        parts = [partition_witness(p, field) for p in tup]
        datum = parts[0]
        for extra in parts[1:]:
            datum = direct_sum(datum, extra)
        if not (datum.is_solution() and datum.is_stable()):
            continue
        if datum.degeneracy_index_at(field.zero, field.zero) >= l:
            return finish(datum, "structured")

    for attempt in range(1, random_attempts + 1):
        trace["random_attempts"] = attempt
        result = sample_stable(n, r, rng.child("witness", attempt), field,
                               max_attempts=1)
        if result.found and result.datum.degeneracy_index_at(
                field.zero, field.zero) >= l:
            return finish(result.datum, "randomized")

    f2 = GF(2)
    if f2.p ** (2 * n * n + 2 * n * r) <= tiny_budget:
        for datum in iter_adhm_data(f2, n, r, tiny_budget):
            trace["exhaustive_scanned"] += 1
            if (datum.is_solution() and datum.is_stable()
                    and datum.degeneracy_index_at(0, 0) >= l):
                return finish(datum, "exhaustive")

    return WitnessSearch(r, n, l, None, None, None, trace)
