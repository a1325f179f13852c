"""Independent oracles used to validate the library's linear algebra.

These deliberately avoid Gaussian elimination: determinants come from
Laplace expansion and ranks from exhaustive minor search, so they check the
elimination code through a different computational path.
"""

from __future__ import annotations

from itertools import combinations

from degenlab.matrices import Matrix, Subspace


def det_by_minors(m: Matrix):
    """Determinant by recursive Laplace expansion along the first row."""
    assert m.nrows == m.ncols
    f = m.field
    n = m.nrows
    if n == 0:
        return f.one
    if n == 1:
        return m.rows[0][0]
    total = f.zero
    for j in range(n):
        a = m.rows[0][j]
        if a == f.zero:
            continue
        sub = Matrix(f, [[m.rows[i][k] for k in range(n) if k != j]
                         for i in range(1, n)])
        cofactor = f.mul(a, det_by_minors(sub))
        total = f.add(total, cofactor) if j % 2 == 0 else f.sub(total, cofactor)
    return total


def rank_by_minors(m: Matrix) -> int:
    """Largest k such that some k x k minor is nonzero."""
    f = m.field
    for k in range(min(m.nrows, m.ncols), 0, -1):
        for rows in combinations(range(m.nrows), k):
            for cols in combinations(range(m.ncols), k):
                sub = Matrix(f, [[m.rows[i][j] for j in cols] for i in rows])
                if det_by_minors(sub) != f.zero:
                    return k
    return 0


def count_subspaces_by_enumeration(field, ambient: int, dim: int) -> int:
    """Number of dim-dimensional subspaces of F_q^ambient, by brute span."""
    from degenlab.matrices import iter_matrices
    seen = set()
    for m in iter_matrices(field, ambient, dim):
        space = Subspace.span(m)
        if space.dim == dim:
            seen.add(space.basis.key())
    return len(seen)
