"""Blow-up quiver laboratory: data, conventions, projections, benchmarks.

A datum is (B1, B2, d, i, j) with B1, B2: V1 -> V2 and d: V2 -> V1.  The
printed source material is ambiguous about where the framing maps attach,
about a possible framing term in the equation, and about the exact
compositions in the two projection maps; the displayed formulas do not
typecheck as a single consistent assignment.  Rather than guessing, every
candidate reading lives in an explicit finite catalog and an empirical
search (`convention_search`) scores each entry against benchmarks that the
moduli theory fixes unambiguously:

  (a) both projections must land on honest framed solutions, stably;
  (b) with V2 = 0 the moduli set must be the Grassmannian of n1-planes in
      the framing space, counted exactly over F_2 and F_3;
  (c) tangent dimensions at stable points must match
      2 n1 n2 - n1^2 - n2^2 + (n1 + n2) r;
  (d) gauge-corrected totals must match the classical point count of the
      Grassmannian of the framed universal complex.

Criteria (a)-(c) alone leave two readings alive at desk scale; (d) is the
tie-break.  Reports always name the catalog entry used.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .adhm import ADHMDatum, enumerate_stable_solutions as enumerate_framed_solutions
from .counting import BudgetExceeded, gaussian_binomial, general_linear_order
from .fields import Field, GF, PrimeField
from .matrices import (Matrix, Subspace, hstack, image, intersect,
                       iter_entry_tuples, kernel, preimage, solve_matrix)
from .numerology import quiver_moduli_dimension
from .rng import SplitRng

CATALOG_VERSION = "1"

#: Framing attachments: where i lands and where j starts.
FRAMING_I_INTO_V1 = "i_into_v1"   # i: W -> V1 (n1 x r), j: V2 -> W (r x n2)
FRAMING_I_INTO_V2 = "i_into_v2"   # i: W -> V2 (n2 x r), j: V1 -> W (r x n1)


@dataclass(frozen=True)
class Convention:
    """One reading of the quiver data: typing, equation, stability, projections."""

    id: str
    framing: str      # FRAMING_I_INTO_V1 | FRAMING_I_INTO_V2
    equation: str     # "plain" (B1 d B2 - B2 d B1 = 0) | "framed" (adds the i j term)
    stability: str    # "v1_only" (largest closed pair has S1 = 0) | "pair" (both zero)
    zeta_framing: str  # compositions used by the projection to the V1-side datum
    eta_framing: str   # compositions used by the projection to the V2-side datum


def _build_catalog() -> tuple[Convention, ...]:
    entries = []
    # Framing as printed: i into V1.  The projections need a composed
    # j-component (V1 -> W) and i-component (W -> V2); every type-consistent
    # composition of path length <= 2 is a candidate.
    for eq in ("plain", "framed"):
        for stab in ("v1_only", "pair"):
            for zj in ("jB1", "jB2"):
                for ei in ("B1i", "B2i"):
                    entries.append(Convention(
                        id=f"iv1-{eq}-{stab}-{zj}-{ei}",
                        framing=FRAMING_I_INTO_V1, equation=eq, stability=stab,
                        zeta_framing=f"i,{zj}", eta_framing=f"{ei},j"))
    # Transposed framing: i into V2.  Here exactly one composition of path
    # length <= 2 exists for each projection component, so zeta and eta are
    # forced: zeta = (dB1, dB2, di, j), eta = (B1d, B2d, i, jd).
    for eq in ("plain", "framed"):
        for stab in ("v1_only", "pair"):
            entries.append(Convention(
                id=f"iv2-{eq}-{stab}",
                framing=FRAMING_I_INTO_V2, equation=eq, stability=stab,
                zeta_framing="di,j", eta_framing="i,jd"))
    return tuple(entries)


CATALOG: tuple[Convention, ...] = _build_catalog()


def convention_by_id(conv_id: str) -> Convention:
    for conv in CATALOG:
        if conv.id == conv_id:
            return conv
    raise KeyError(f"no catalog entry {conv_id!r}")


def catalog_table_text() -> str:
    """The catalog as a versioned plain-text table (shipped as conventions.txt)."""
    lines = [f"# blow-up quiver convention catalog, version {CATALOG_VERSION}",
             "# id | framing | equation | stability | zeta components | eta components"]
    for c in CATALOG:
        lines.append(f"{c.id} | {c.framing} | {c.equation} | {c.stability} | "
                     f"{c.zeta_framing} | {c.eta_framing}")
    return "\n".join(lines) + "\n"


class ConventionViolation(RuntimeError):
    """A projection output failed its postcondition under some catalog entry."""

    def __init__(self, convention: Convention, morphism: str, reason: str):
        super().__init__(f"{convention.id}: {morphism} output {reason}")
        self.convention = convention
        self.morphism = morphism
        self.reason = reason


@dataclass
class PerverseDatum:
    """(B1, B2, d, i, j) on spaces of dimensions (n1, n2, r).

    B1, B2 are n2 x n1 (maps V1 -> V2) and d is n1 x n2 (map V2 -> V1) in
    every reading; the shapes of i and j depend on the framing attachment,
    so they are validated against a convention rather than at construction.
    """

    n1: int
    n2: int
    r: int
    B1: Matrix
    B2: Matrix
    d: Matrix
    i: Matrix
    j: Matrix

    def __post_init__(self):
        f = self.B1.field
        for mat, rows, cols in ((self.B1, self.n2, self.n1),
                                (self.B2, self.n2, self.n1),
                                (self.d, self.n1, self.n2)):
            if mat.field != f or (mat.nrows, mat.ncols) != (rows, cols):
                raise ValueError("B or d component has the wrong shape")

    @property
    def field(self) -> Field:
        return self.B1.field

    def validate_framing(self, framing: str) -> None:
        if framing == FRAMING_I_INTO_V1:
            ishape, jshape = (self.n1, self.r), (self.r, self.n2)
        elif framing == FRAMING_I_INTO_V2:
            ishape, jshape = (self.n2, self.r), (self.r, self.n1)
        else:
            raise ValueError(f"unknown framing {framing!r}")
        if (self.i.nrows, self.i.ncols) != ishape or (self.j.nrows, self.j.ncols) != jshape:
            raise ValueError(f"framing shapes do not match {framing}")

    def to_jsonable(self) -> dict:
        return {"n1": self.n1, "n2": self.n2, "r": self.r,
                "field": repr(self.field),
                "B1": self.B1.to_jsonable()["entries"],
                "B2": self.B2.to_jsonable()["entries"],
                "d": self.d.to_jsonable()["entries"],
                "i": self.i.to_jsonable()["entries"],
                "j": self.j.to_jsonable()["entries"]}


def equation_residuals(p: PerverseDatum, conv: Convention) -> list[Matrix]:
    """All components of the selected equation; the datum solves it when every
    component vanishes."""
    p.validate_framing(conv.framing)
    mu = p.B1 @ p.d @ p.B2 - p.B2 @ p.d @ p.B1
    if conv.equation == "plain":
        return [mu]
    if conv.framing == FRAMING_I_INTO_V2:
        # i j: V1 -> V2 has the same shape as mu, so one framed equation.
        return [mu + p.i @ p.j]
    # i into V1: i j is V2 -> V1; no framing term matches mu's shape, so the
    # framed variant imposes the extra equation i j = 0 alongside mu = 0.
    return [mu, p.i @ p.j]


def perverse_residual(p: PerverseDatum, conv: Convention) -> Matrix:
    """The n2 x n1 moment-map component of the equation."""
    return equation_residuals(p, conv)[0]


def is_perverse_solution(p: PerverseDatum, conv: Convention) -> bool:
    return all(m.is_zero() for m in equation_residuals(p, conv))


def _largest_closed_pair(p: PerverseDatum, conv: Convention) -> tuple[Subspace, Subspace]:
    """Greatest pair (S1, S2) with B(S1) in S2, d(S2) in S1 and the coframing
    constraint (S1 in ker j for i into V2, S2 in ker j for i into V1)."""
    field = p.field
    if conv.framing == FRAMING_I_INTO_V2:
        s1 = kernel(p.j)
        s2 = Subspace.full(field, p.n2)
    else:
        s1 = Subspace.full(field, p.n1)
        s2 = kernel(p.j)
    while True:
        new_s1 = intersect(s1, intersect(preimage(p.B1, s2), preimage(p.B2, s2)))
        new_s2 = intersect(s2, preimage(p.d, new_s1))
        if new_s1 == s1 and new_s2 == s2:
            return s1, s2
        s1, s2 = new_s1, new_s2


def is_perverse_stable(p: PerverseDatum, conv: Convention) -> bool:
    s1, s2 = _largest_closed_pair(p, conv)
    if conv.stability == "v1_only":
        return s1.dim == 0
    if conv.stability == "pair":
        return s1.dim == 0 and s2.dim == 0
    raise ValueError(f"unknown stability {conv.stability!r}")


def d_injective(p: PerverseDatum) -> bool:
    return p.d.rank() == p.n2


def _framed_components(p: PerverseDatum, conv: Convention,
                       which: str) -> tuple[Matrix, Matrix]:
    """(i-component, j-component) of the requested projection output."""
    tokens = (conv.zeta_framing if which == "zeta" else conv.eta_framing).split(",")
    built = []
    for tok in tokens:
        if tok == "i":
            built.append(p.i)
        elif tok == "j":
            built.append(p.j)
        elif tok == "di":
            built.append(p.d @ p.i)
        elif tok == "jd":
            built.append(p.j @ p.d)
        elif tok == "jB1":
            built.append(p.j @ p.B1)
        elif tok == "jB2":
            built.append(p.j @ p.B2)
        elif tok == "B1i":
            built.append(p.B1 @ p.i)
        elif tok == "B2i":
            built.append(p.B2 @ p.i)
        else:
            raise ValueError(f"unknown framing token {tok!r}")
    return built[0], built[1]


def _check_projection_preconditions(p: PerverseDatum, conv: Convention) -> None:
    if not is_perverse_solution(p, conv):
        raise ValueError("projection requires a solution of the equation")
    if not is_perverse_stable(p, conv):
        raise ValueError("projection requires a stable datum")
    if not d_injective(p):
        raise ValueError("projection requires injective d")


def zeta(p: PerverseDatum, conv: Convention) -> ADHMDatum:
    """Project to the framed datum on V1: (d B1, d B2, framing per catalog).

    The output must solve the framed equation and be stable; a violation is
    reported against the convention, never silently accepted.
    """
    _check_projection_preconditions(p, conv)
    icomp, jcomp = _framed_components(p, conv, "zeta")
    out = ADHMDatum(p.n1, p.r, p.d @ p.B1, p.d @ p.B2, icomp, jcomp)
    if not out.is_solution():
        raise ConventionViolation(conv, "zeta", "violates the framed equation")
    if not out.is_stable():
        raise ConventionViolation(conv, "zeta", "is unstable")
    return out


def eta(p: PerverseDatum, conv: Convention) -> ADHMDatum:
    """Project to the framed datum on V2: (B1 d, B2 d, framing per catalog)."""
    _check_projection_preconditions(p, conv)
    icomp, jcomp = _framed_components(p, conv, "eta")
    out = ADHMDatum(p.n2, p.r, p.B1 @ p.d, p.B2 @ p.d, icomp, jcomp)
    if not out.is_solution():
        raise ConventionViolation(conv, "eta", "violates the framed equation")
    if not out.is_stable():
        raise ConventionViolation(conv, "eta", "is unstable")
    return out


def perverse_tangent_dimension(p: PerverseDatum, conv: Convention) -> int:
    """Kernel dimension of the linearized equation minus dim(GL(V1) x GL(V2))."""
    if not is_perverse_solution(p, conv):
        raise ValueError("tangent space is computed at solutions only")
    if not is_perverse_stable(p, conv):
        raise ValueError("tangent dimension formula needs a stable point")
    f = p.field
    n1, n2, r = p.n1, p.n2, p.r
    comps = equation_residuals(p, conv)
    shapes = [(m.nrows, m.ncols) for m in comps]
    total_rows = sum(a * b for a, b in shapes)
    if conv.framing == FRAMING_I_INTO_V2:
        ishape, jshape = (n2, r), (r, n1)
    else:
        ishape, jshape = (n1, r), (r, n2)

    framed = conv.equation == "framed"

    def differentials(db1, db2, dd, di, dj) -> list[Matrix]:
        mu = (db1 @ p.d @ p.B2 + p.B1 @ dd @ p.B2 + p.B1 @ p.d @ db2
              - db2 @ p.d @ p.B1 - p.B2 @ dd @ p.B1 - p.B2 @ p.d @ db1)
        if not framed:
            return [mu]
        dij = di @ p.j + p.i @ dj
        if conv.framing == FRAMING_I_INTO_V2:
            return [mu + dij]
        return [mu, dij]

    blocks = [((n2, n1), "b1"), ((n2, n1), "b2"), ((n1, n2), "d"),
              (ishape, "i"), (jshape, "j")]
    cols: list[list] = []
    zero = {name: Matrix.zeros(f, *shape) for shape, name in blocks}
    for shape, name in blocks:
        rows_, cols_ = shape
        for a in range(rows_):
            for b in range(cols_):
                delta = dict(zero)
                delta[name] = Matrix.unit(f, rows_, cols_, a, b)
                vals = differentials(delta["b1"], delta["b2"], delta["d"],
                                     delta["i"], delta["j"])
                flat: list = []
                for v in vals:
                    for row in v.rows:
                        flat.extend(row)
                cols.append(flat)
    n_unknowns = len(cols)
    system = Matrix(f, cols, n_unknowns, total_rows).transpose()
    kernel_dim = n_unknowns - system.rank()
    return kernel_dim - (n1 * n1 + n2 * n2)


# -- enumeration and construction ---------------------------------------------

def iter_perverse_data(field: PrimeField, n1: int, n2: int, r: int, framing: str,
                       budget: int = 1 << 20) -> Iterator[PerverseDatum]:
    """Odometer over all data of the given shape over a tiny field."""
    if framing == FRAMING_I_INTO_V1:
        ishape, jshape = (n1, r), (r, n2)
    elif framing == FRAMING_I_INTO_V2:
        ishape, jshape = (n2, r), (r, n1)
    else:
        raise ValueError(f"unknown framing {framing!r}")
    shapes = [(n2, n1), (n2, n1), (n1, n2), ishape, jshape]
    entries = sum(a * b for a, b in shapes)
    size = field.p ** entries
    if size > budget:
        raise BudgetExceeded(size, budget,
                             f"blow-up quiver enumeration (n1={n1}, n2={n2}, r={r})")
    for flat in iter_entry_tuples(field.p, entries):
        mats = []
        off = 0
        for rows_, cols_ in shapes:
            mats.append(Matrix(field, [list(flat[off + k * cols_: off + (k + 1) * cols_])
                                       for k in range(rows_)], rows_, cols_))
            off += rows_ * cols_
        yield PerverseDatum(n1, n2, r, *mats)


def enumerate_stable_solutions(field: PrimeField, n1: int, n2: int, r: int,
                               conv: Convention, budget: int = 1 << 20,
                               cap: int | None = None) -> list[PerverseDatum]:
    out = []
    for p in iter_perverse_data(field, n1, n2, r, conv.framing, budget):
        if is_perverse_solution(p, conv) and is_perverse_stable(p, conv):
            out.append(p)
            if cap is not None and len(out) >= cap:
                break
    return out


def count_stable_solutions(field: PrimeField, n1: int, n2: int, r: int,
                           conv: Convention, budget: int = 1 << 20) -> int:
    count = 0
    for p in iter_perverse_data(field, n1, n2, r, conv.framing, budget):
        if is_perverse_solution(p, conv) and is_perverse_stable(p, conv):
            count += 1
    return count


def datum_from_framed(framed: ADHMDatum, n2: int, rng: SplitRng) -> PerverseDatum | None:
    """Lift a stable framed datum to a quiver datum in the i-into-V2 framing.

    Needs the column span of (-Y | X | i) to fit inside an n2-dimensional
    subspace; d becomes a basis of such a subspace and B1, B2, i solve
    d B1 = X, d B2 = Y, d i' = i.  Returns None when the span is too big.
    """
    f = framed.field
    b_map = hstack(-framed.Y, framed.X, framed.i)
    img = image(b_map)
    if img.dim > n2:
        return None
    extra_needed = n2 - img.dim
    basis = img.basis
    guard = 0
    while basis.ncols < n2:
        cand = hstack(basis, Matrix.random(f, framed.n, 1, rng))
        if cand.rank() == basis.ncols + 1:
            basis = cand
        guard += 1
        if guard > 100 * (extra_needed + 1):
            return None
    d = basis
    b1 = solve_matrix(d, framed.X)
    b2 = solve_matrix(d, framed.Y)
    i2 = solve_matrix(d, framed.i)
    if b1 is None or b2 is None or i2 is None:
        return None
    return PerverseDatum(framed.n, n2, framed.r, b1, b2, d, i2, framed.j)


def zeta_fiber_count(framed: ADHMDatum, n2: int, conv: Convention,
                     budget: int = 1 << 20) -> int:
    """Exhaustively count stable solutions projecting to the exact framed datum."""
    if not isinstance(framed.field, PrimeField):
        raise ValueError("fiber counting needs a finite field")
    count = 0
    for p in iter_perverse_data(framed.field, framed.n, n2, framed.r,
                                conv.framing, budget):
        if not (is_perverse_solution(p, conv) and is_perverse_stable(p, conv)):
            continue
        if not d_injective(p):
            continue
        try:
            z = zeta(p, conv)
        except ConventionViolation:
            continue
        if (z.X, z.Y, z.i, z.j) == (framed.X, framed.Y, framed.i, framed.j):
            count += 1
    return count


# -- the convention search ------------------------------------------------------

N2_ZERO_BENCHMARKS = ((0, 1), (1, 1), (2, 1), (1, 2), (2, 2), (3, 2))
COUNT_BENCHMARKS = (((1, 1, 1), (2, 3)), ((2, 1, 1), (2,)), ((2, 1, 2), (2,)))


@dataclass
class ConventionSearchResult:
    entries: dict          # id -> {"criteria": {...}, "survived": bool}
    survivors: list[str]
    samples_per_size: int
    sizes: tuple

    @property
    def unique(self) -> Convention | None:
        if len(self.survivors) == 1:
            return convention_by_id(self.survivors[0])
        return None

    @property
    def ambiguous(self) -> bool:
        return len(self.survivors) != 1

    def to_jsonable(self) -> dict:
        return {"sizes": [list(s) for s in self.sizes],
                "samples_per_size": self.samples_per_size,
                "survivors": self.survivors,
                "entries": self.entries}


def n2_zero_benchmark_results(conv: Convention) -> tuple[bool, dict]:
    details = {}
    ok = True
    for n1, r in N2_ZERO_BENCHMARKS:
        for q in (2, 3):
            count = count_stable_solutions(GF(q), n1, 0, r, conv)
            expected = gaussian_binomial(r, n1, q) * general_linear_order(n1, q)
            details[f"(n1={n1},r={r},q={q})"] = {"count": count, "expected": expected}
            ok = ok and count == expected and (count > 0) == (n1 <= r)
    return ok, details


def collect_stable_samples(conv: Convention, sizes, samples_per_size: int):
    samples = {}
    for (n1, n2, r) in sizes:
        found: list[PerverseDatum] = []
        entries = 3 * n1 * n2 + (n1 + n2) * r
        for q in (2, 3):
            if q ** entries > (1 << 15) or len(found) >= samples_per_size:
                continue
            found.extend(enumerate_stable_solutions(
                GF(q), n1, n2, r, conv, cap=samples_per_size - len(found)))
        samples[(n1, n2, r)] = found
    return samples


def projection_postcondition_results(conv: Convention, samples) -> tuple[bool, dict]:
    details = {}
    ok = True
    for size, data in samples.items():
        checked = violations = 0
        for p in data:
            if not d_injective(p):
                continue  # outside the domain of the projections
            checked += 1
            try:
                zeta(p, conv)
                eta(p, conv)
            except ConventionViolation as exc:
                violations += 1
                details.setdefault("first_violation", str(exc))
        details[str(size)] = {"checked": checked, "violations": violations}
        ok = ok and violations == 0
    return ok, details


def tangent_benchmark_results(conv: Convention, samples) -> tuple[bool, dict]:
    details = {}
    ok = True
    for (n1, n2, r), data in samples.items():
        expect = quiver_moduli_dimension(n1, n2, r)
        bad = 0
        for p in data:
            if perverse_tangent_dimension(p, conv) != expect:
                bad += 1
        details[str((n1, n2, r))] = {"expected": expect, "samples": len(data),
                                     "mismatches": bad}
        ok = ok and bad == 0
    return ok, details


def count_correspondence_results(conv: Convention, framed_cache: dict) -> tuple[bool, dict]:
    details = {}
    ok = True
    for (n1, n2, r), qs in COUNT_BENCHMARKS:
        for q in qs:
            perv = count_stable_solutions(GF(q), n1, n2, r, conv)
            key = (n1, r, q)
            if key not in framed_cache:
                framed_cache[key] = [a.universal_complex_at(0, 0).h1
                                     for a in enumerate_framed_solutions(GF(q), n1, r)]
            grass = sum(gaussian_binomial(h1, n1 - n2, q) for h1 in framed_cache[key])
            expected = general_linear_order(n2, q) * grass
            details[f"(n1={n1},n2={n2},r={r},q={q})"] = {
                "stable_count": perv, "expected": expected}
            ok = ok and perv == expected
    return ok, details


def convention_search(sizes=((1, 0, 1), (1, 1, 1), (2, 1, 1), (2, 1, 2)),
                      samples_per_size: int = 40,
                      seed: int | str = 0) -> ConventionSearchResult:
    """Score every catalog entry and return the survivors.

    Criteria run cheapest-first and an entry stops at its first failure, so
    the result records, for each entry, every criterion it was subjected to.
    A unique survivor is the expected outcome; zero or several survivors is
    an acceptable experimental outcome and is reported as such.
    """
    del seed  # enumeration-based; kept for interface uniformity
    entries: dict = {}
    survivors: list[str] = []
    framed_cache: dict = {}
    for conv in CATALOG:
        record: dict = {"criteria": {}}
        ok, details = n2_zero_benchmark_results(conv)
        record["criteria"]["b_n2_zero_grassmannian"] = {"passed": ok, **details}
        if ok:
            samples = collect_stable_samples(conv, sizes, samples_per_size)
            ok, details = projection_postcondition_results(conv, samples)
            record["criteria"]["a_projection_postconditions"] = {"passed": ok, **details}
            if ok:
                ok, details = tangent_benchmark_results(conv, samples)
                record["criteria"]["c_tangent_dimension"] = {"passed": ok, **details}
            if ok:
                ok, details = count_correspondence_results(conv, framed_cache)
                record["criteria"]["d_count_correspondence"] = {"passed": ok, **details}
        record["survived"] = ok
        entries[conv.id] = record
        if ok:
            survivors.append(conv.id)
    return ConventionSearchResult(entries, survivors, samples_per_size, tuple(sizes))
