"""Exhaustive finite-field laboratory for the generic determinantal family.

The family V_{m,n} is the affine space of all n x m matrices over F_q,
carrying the universal two-term complex.  Rank strata are counted two ways:
by exhaustive enumeration (ground truth, budgeted) and by the classical
closed formula (fast, valid at any prime once validated against the
enumeration).  Classical point counts of the Grassmannian, dual
Grassmannian, incidence and degeneracy loci are assembled from the strata,
interpolated into count polynomials, and compared against the dimension
bookkeeping from the numerology module.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .counting import (BudgetExceeded, CountPolynomial, CountTable,
                       fit_count_polynomial, gaussian_binomial,
                       rank_count_formula)
from .fields import _is_prime
from .matrices import iter_entry_tuples
from .numerology import d0_virtual_dimension, expected_codim, vdim_inc
from .reporting import Check

DEFAULT_BUDGET = 1 << 24

#: Primes available for interpolation support, smallest first.
SUPPORT_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


@dataclass(frozen=True)
class FamilySpec:
    """The family V_{m,n} over F_q with an enumeration budget."""

    m: int
    n: int
    q: int
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError("family dimensions must be positive")
        if not _is_prime(self.q):
            raise ValueError(f"{self.q} is not prime")

    @property
    def e(self) -> int:
        return self.n - self.m

    @property
    def size(self) -> int:
        return self.q ** (self.m * self.n)

    def check_budget(self) -> None:
        if self.size > self.budget:
            raise BudgetExceeded(self.size, self.budget,
                                 f"enumeration of V_{{{self.m},{self.n}}} over F_{self.q}")

    def label(self) -> str:
        return f"V_{self.m},{self.n}/F_{self.q}"


def _fast_rank_mod_p(rows: list[list[int]], p: int) -> int:
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    rank = 0
    for c in range(ncols):
        pivot = -1
        for i in range(rank, nrows):
            if rows[i][c] % p:
                pivot = i
                break
        if pivot < 0:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = pow(rows[rank][c], -1, p)
        prow = rows[rank]
        if inv != 1:
            for j in range(c, ncols):
                prow[j] = (prow[j] * inv) % p
        for i in range(rank + 1, nrows):
            f = rows[i][c] % p
            if f:
                row = rows[i]
                for j in range(c, ncols):
                    row[j] = (row[j] - f * prow[j]) % p
        rank += 1
        if rank == nrows:
            break
    return rank


def rank_counts_by_enumeration(spec: FamilySpec,
                               index_range: tuple[int, int] | None = None) -> CountTable:
    """Count n x m matrices over F_q by rank, by brute enumeration.

    `index_range` restricts to a slice of the row-major odometer so the scan
    can be partitioned; partial tables merge associatively into the full one.
    """
    spec.check_budget()
    m, n, q = spec.m, spec.n, spec.q
    counts = {k: 0 for k in range(min(m, n) + 1)}
    for flat in iter_entry_tuples(q, m * n, index_range):
        rows = [list(flat[i * m:(i + 1) * m]) for i in range(n)]
        counts[_fast_rank_mod_p(rows, q)] += 1
    return CountTable(spec.label(), q, counts)


def rank_counts_by_formula(m: int, n: int, q: int) -> CountTable:
    counts = {k: rank_count_formula(m, n, k, q) for k in range(min(m, n) + 1)}
    return CountTable(f"V_{m},{n}/F_{q}", q, counts)


def rank_counts(spec: FamilySpec, method: str = "auto") -> CountTable:
    """Rank strata counts; "auto" enumerates when in budget, else uses the formula."""
    if method == "enumerate":
        return rank_counts_by_enumeration(spec)
    if method == "formula":
        return rank_counts_by_formula(spec.m, spec.n, spec.q)
    if method == "auto":
        if spec.size <= spec.budget:
            return rank_counts_by_enumeration(spec)
        return rank_counts_by_formula(spec.m, spec.n, spec.q)
    raise ValueError(f"unknown method {method!r}")


def _partition_ranges(size: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, size)) if size else 1
    step, extra = divmod(size, parts)
    ranges = []
    lo = 0
    for k in range(parts):
        hi = lo + step + (1 if k < extra else 0)
        ranges.append((lo, hi))
        lo = hi
    return ranges


def rank_counts_partitioned(spec: FamilySpec, jobs: int = 1) -> CountTable:
    """Partition the odometer across workers and merge the partial tables.

    The merge is associative and the partition boundaries are deterministic,
    so the result is independent of the level of parallelism.
    """
    spec.check_budget()
    ranges = _partition_ranges(spec.size, jobs)
    if jobs <= 1:
        tables = [rank_counts_by_enumeration(spec, r) for r in ranges]
    else:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            tables = list(pool.map(rank_counts_by_enumeration,
                                   [spec] * len(ranges), ranges))
    merged = tables[0]
    for t in tables[1:]:
        merged = merged.merge(t)
    return merged


def corank_counts(m: int, n: int, q: int) -> dict[int, int]:
    """Counts keyed by degeneracy index l = h0 = n - rank."""
    return {n - k: rank_count_formula(m, n, k, q) for k in range(min(m, n) + 1)}


# -- classical point counts via strata ---------------------------------------

def degeneracy_count(m: int, n: int, k: int, q: int) -> int:
    """|D(k)| = number of matrices with h0 >= k (rank <= n - k)."""
    return sum(c for l, c in corank_counts(m, n, q).items() if l >= k)


def grassmannian_count(m: int, n: int, d: int, q: int) -> int:
    """Classical F_q-points of the rank-d Grassmannian of the family."""
    if d < 0:
        raise ValueError("d must be nonnegative")
    return sum(c * gaussian_binomial(l, d, q)
               for l, c in corank_counts(m, n, q).items())


def grassmannian_dual_count(m: int, n: int, d: int, q: int) -> int:
    """Same for the shifted dual complex (h0 of the dual is h0 - e = h1)."""
    if d < 0:
        raise ValueError("d must be nonnegative")
    e = n - m
    return sum(c * gaussian_binomial(l - e, d, q)
               for l, c in corank_counts(m, n, q).items())


def incidence_count(m: int, n: int, d_plus: int, d_minus: int, q: int) -> int:
    """Classical F_q-points of the incidence variety.

    Over the corank-l stratum the fiber is Gr(l, d_plus) x Gr(l - e, d_minus);
    the orientation e = n - m >= 0 is required (pass the transposed family
    otherwise).
    """
    e = n - m
    if e < 0:
        raise ValueError("incidence counting requires n >= m; "
                         "pass the shifted dual (transposed family) instead")
    if d_plus < 0 or d_minus < 0:
        raise ValueError("quotient ranks must be nonnegative")
    return sum(c * gaussian_binomial(l, d_plus, q) * gaussian_binomial(l - e, d_minus, q)
               for l, c in corank_counts(m, n, q).items())


# -- enumeration-based ground truth for the same counts ----------------------

def _fold_over_family(spec: FamilySpec, weight) -> int:
    """Sum weight(h0) over every matrix of the family, by enumeration."""
    spec.check_budget()
    m, n, q = spec.m, spec.n, spec.q
    cache = {}
    total = 0
    for flat in iter_entry_tuples(q, m * n):
        rows = [list(flat[i * m:(i + 1) * m]) for i in range(n)]
        h0 = n - _fast_rank_mod_p(rows, q)
        if h0 not in cache:
            cache[h0] = weight(h0)
        total += cache[h0]
    return total


def grassmannian_count_by_enumeration(spec: FamilySpec, d: int) -> int:
    return _fold_over_family(spec, lambda h0: gaussian_binomial(h0, d, spec.q))


def incidence_count_by_enumeration(spec: FamilySpec, d_plus: int, d_minus: int) -> int:
    e = spec.e
    if e < 0:
        raise ValueError("incidence counting requires n >= m")
    return _fold_over_family(
        spec, lambda h0: (gaussian_binomial(h0, d_plus, spec.q)
                          * gaussian_binomial(h0 - e, d_minus, spec.q)))


def degeneracy_count_by_enumeration(spec: FamilySpec, k: int) -> int:
    return _fold_over_family(spec, lambda h0: 1 if h0 >= k else 0)


# -- count polynomials --------------------------------------------------------

def polynomial_from_counts(count_at, expected_degree: int,
                           min_support: int = 4) -> tuple[CountPolynomial, bool, int]:
    """Interpolate count_at(q) on enough primes and validate on a held-out one.

    The support uses max(expected_degree + 1, min_support) primes, since an
    interpolant can only be trusted with one more support point than the
    degree; the held-out prime guards against a wrong degree guess.
    Returns (polynomial, holdout_ok, holdout_prime).
    """
    n_support = max(expected_degree + 1, min_support)
    if n_support + 1 > len(SUPPORT_PRIMES):
        raise ValueError("not enough support primes configured")
    support = SUPPORT_PRIMES[:n_support]
    holdout = SUPPORT_PRIMES[n_support]
    poly = fit_count_polynomial([(q, count_at(q)) for q in support])
    return poly, poly.matches(holdout, count_at(holdout)), holdout


def degeneracy_polynomial(m: int, n: int, k: int) -> tuple[CountPolynomial, bool, int]:
    expected = m * n - expected_codim(k, n - m)
    return polynomial_from_counts(lambda q: degeneracy_count(m, n, k, q), expected)


# -- dimension-claim verification ---------------------------------------------

def codim_law_checks(m: int, n: int, ks=None) -> list[Check]:
    """Check deg |D(k)| = mn - max(0, k(k+m-n)) for each k, with holdout guard."""
    if ks is None:
        ks = range(0, n + 2)
    checks = []
    for k in ks:
        anchor = "deg |D(k)(F_q)| = mn - max(0, k*(k+m-n))"
        if k > n:
            count0 = all(degeneracy_count(m, n, k, q) == 0 for q in (2, 3, 5))
            checks.append(Check(
                name=f"codim-law V_{m},{n} k={k} (empty: k exceeds max corank)",
                anchor=anchor, passed=count0,
                details={"m": m, "n": n, "k": k}))
            continue
        expected = m * n - expected_codim(k, n - m)
        poly, holdout_ok, holdout = polynomial_from_counts(
            lambda q: degeneracy_count(m, n, k, q), expected)
        monic = poly.leading_coefficient == 1
        passed = poly.degree == expected and holdout_ok and monic
        checks.append(Check(
            name=f"codim-law V_{m},{n} k={k}",
            anchor=anchor, passed=passed,
            details={"m": m, "n": n, "k": k, "degree": poly.degree,
                     "expected": expected, "holdout_prime": holdout,
                     "holdout_ok": holdout_ok,
                     "leading_coefficient": str(poly.leading_coefficient)}))
    return checks


def verify_dimension_claims(m: int, n: int, d_plus: int, d_minus: int,
                            window_qs=(2, 3, 5)) -> list[Check]:
    """Dimension and birationality bookkeeping for one (family, d+, d-).

    Checks, in order: (a) incidence count-polynomial degree equals the
    virtual dimension; (b) Grassmannian and dual-Grassmannian degrees match
    dim X - d(d -+ e); (c) when d+ = d- + e the four count polynomials
    (incidence, both Grassmannians, degeneracy locus) share degree and
    leading term; (d) inside the isomorphism window the four counts agree
    exactly at every tested q.  Instances whose fiber bound max(d+, e+d-)
    exceeds the largest corank are empty and asserted to have zero counts.
    """
    e = n - m
    if e < 0:
        raise ValueError("verify_dimension_claims requires n >= m")
    dim_x = m * n
    checks = []
    l_star = max(d_plus, e + d_minus)
    vdim = vdim_inc(dim_x, e, d_plus, d_minus)
    inc_anchor = "deg |Inc(F_q)| = dim X - d+(d+ - e) + d-(d+ - d- - e)"

    if l_star > n:
        empty = all(incidence_count(m, n, d_plus, d_minus, q) == 0 for q in window_qs)
        checks.append(Check(
            name=f"incidence-empty V_{m},{n} d+={d_plus} d-={d_minus}",
            anchor="Inc = empty set when max(d+, e+d-) exceeds the maximal corank",
            passed=empty,
            details={"m": m, "n": n, "d_plus": d_plus, "d_minus": d_minus,
                     "l_star": l_star}))
        return checks

    inc_poly, inc_hold, hq = polynomial_from_counts(
        lambda q: incidence_count(m, n, d_plus, d_minus, q), max(vdim, 0))
    inc_ok = inc_poly.degree == vdim and inc_hold
    details = {"m": m, "n": n, "d_plus": d_plus, "d_minus": d_minus,
               "degree": inc_poly.degree, "vdim": vdim, "holdout_prime": hq}
    if e == 1:
        d0 = d0_virtual_dimension(dim_x, d_plus, d_minus)
        inc_ok = inc_ok and inc_poly.degree == d0
        details["d0"] = d0
    else:
        d0 = d0_virtual_dimension(dim_x, d_plus, d_minus)
        details["d0_discrepancy"] = vdim - d0
    checks.append(Check(name=f"incidence-dim V_{m},{n} d+={d_plus} d-={d_minus}",
                        anchor=inc_anchor, passed=inc_ok, details=details))

    for (tag, count_fn, dd, sign) in (
            ("gr", lambda q: grassmannian_count(m, n, d_plus, q), d_plus, +1),
            ("gr-dual", lambda q: grassmannian_dual_count(m, n, d_minus, q), d_minus, -1)):
        if (sign > 0 and max(dd, e) > n) or (sign < 0 and max(dd, 0) > n - e):
            empty = all(count_fn(q) == 0 for q in window_qs)
            checks.append(Check(
                name=f"{tag}-empty V_{m},{n} d={dd}",
                anchor="Gr = empty set when d exceeds the maximal degeneracy index",
                passed=empty, details={"d": dd}))
            continue
        expected = dim_x - dd * (dd - sign * e)
        poly, hold_ok, hq2 = polynomial_from_counts(count_fn, max(expected, 0))
        checks.append(Check(
            name=f"{tag}-dim V_{m},{n} d={dd}",
            anchor="deg |Gr(F_q)| = dim X - d*(d - e)",
            passed=poly.degree == expected and hold_ok,
            details={"d": dd, "degree": poly.degree, "expected": expected,
                     "holdout_prime": hq2}))

    if d_plus == d_minus + e:
        polys = {
            "inc": inc_poly,
            "gr": polynomial_from_counts(
                lambda q: grassmannian_count(m, n, d_plus, q), max(vdim, 0))[0],
            "gr-dual": polynomial_from_counts(
                lambda q: grassmannian_dual_count(m, n, d_minus, q), max(vdim, 0))[0],
            "degeneracy": polynomial_from_counts(
                lambda q: degeneracy_count(m, n, d_plus, q), max(vdim, 0))[0],
        }
        degrees = {tag: p.degree for tag, p in polys.items()}
        leads = {tag: str(p.leading_coefficient) for tag, p in polys.items()}
        agree = (len(set(degrees.values())) == 1
                 and len({p.leading_coefficient for p in polys.values()}) == 1)
        checks.append(Check(
            name=f"birational-leading-terms V_{m},{n} d+={d_plus} d-={d_minus}",
            anchor="Inc, Gr(d+), dual Gr(d-), D(d+) are birational when d+ = d- + e "
                   "(equal degree and leading coefficient)",
            passed=agree, details={"degrees": degrees, "leading": leads}))

        in_window = d_plus * d_minus <= dim_x < (d_plus + 1) * (d_minus + 1)
        if in_window:
            rows = {}
            equal = True
            for q in window_qs:
                four = {
                    "inc": incidence_count(m, n, d_plus, d_minus, q),
                    "gr": grassmannian_count(m, n, d_plus, q),
                    "gr-dual": grassmannian_dual_count(m, n, d_minus, q),
                    "degeneracy": degeneracy_count(m, n, d_plus, q),
                }
                rows[q] = four
                equal = equal and len(set(four.values())) == 1
            checks.append(Check(
                name=f"isomorphism-window V_{m},{n} d+={d_plus} d-={d_minus}",
                anchor="all four projections are isomorphisms when "
                       "d+d- <= dim X < (d+ + 1)(d- + 1): counts agree exactly",
                passed=equal,
                details={"window": f"{d_plus * d_minus} <= {dim_x} < "
                                   f"{(d_plus + 1) * (d_minus + 1)}",
                         "counts": {str(q): rows[q] for q in window_qs}}))
    return checks


def stratified_identity_checks(m: int, n: int, q: int, d_pairs,
                               budget: int = DEFAULT_BUDGET) -> list[Check]:
    """Cross-validate strata-formula counts against exhaustive enumeration."""
    spec = FamilySpec(m, n, q, budget)
    checks = []
    try:
        enum_table = rank_counts_by_enumeration(spec)
    except BudgetExceeded as exc:
        return [Check(name=f"stratified-identity V_{m},{n} q={q}",
                      anchor="|Inc| = sum_l N_l * [l choose d+]_q * [l-e choose d-]_q",
                      passed=False,
                      details={"refused": str(exc), "required": exc.required,
                               "budget": exc.budget})]
    formula_table = rank_counts_by_formula(m, n, q)
    checks.append(Check(
        name=f"rank-counts V_{m},{n} q={q}",
        anchor="#(rank k matrices) = [m choose k]_q * prod_i (q^n - q^i)",
        passed=enum_table.counts == formula_table.counts
               and enum_table.total() == spec.size,
        details={"enumerated": enum_table.counts, "formula": formula_table.counts}))
    for d_plus, d_minus in d_pairs:
        lhs = incidence_count_by_enumeration(spec, d_plus, d_minus)
        rhs = incidence_count(m, n, d_plus, d_minus, q)
        checks.append(Check(
            name=f"stratified-incidence V_{m},{n} q={q} d+={d_plus} d-={d_minus}",
            anchor="|Inc| = sum_l N_l * [l choose d+]_q * [l-e choose d-]_q",
            passed=lhs == rhs, details={"enumerated": lhs, "strata": rhs}))
    return checks
