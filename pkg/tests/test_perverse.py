"""Blow-up quiver data: conventions, stability, projections, benchmarks."""

from pathlib import Path

import pytest

import degenlab.perverse as pv
from degenlab.adhm import ADHMDatum, Partition, direct_sum, partition_witness
from degenlab.counting import gaussian_binomial, general_linear_order
from degenlab.experiments import _framed_fiber_bases
from degenlab.fields import GF
from degenlab.matrices import Matrix
from degenlab.numerology import quiver_moduli_dimension
from degenlab.rng import SplitRng

F2 = GF(2)
F101 = GF(101)

SURVIVOR = pv.convention_by_id("iv2-framed-pair")
V1_ONLY = pv.convention_by_id("iv2-framed-v1_only")
PLAIN = pv.convention_by_id("iv2-plain-pair")
LITERAL = pv.convention_by_id("iv1-plain-v1_only-jB1-B1i")


@pytest.fixture(scope="module")
def search_result():
    return pv.convention_search(sizes=((1, 0, 1), (1, 1, 1)), samples_per_size=24)


def scalar_datum(b1=0, b2=0, d=1, i=0, j=1, field=F101):
    f = field
    return pv.PerverseDatum(1, 1, 1, Matrix(f, [[b1]]), Matrix(f, [[b2]]),
                            Matrix(f, [[d]]), Matrix(f, [[i]]), Matrix(f, [[j]]))


def n2_zero_datum(j_entries, r, field=F2):
    n1 = len(j_entries[0])
    return pv.PerverseDatum(n1, 0, r,
                            Matrix.zeros(field, 0, n1), Matrix.zeros(field, 0, n1),
                            Matrix.zeros(field, n1, 0), Matrix.zeros(field, 0, r),
                            Matrix(field, j_entries, r, n1))


# -- catalog -------------------------------------------------------------------

def test_catalog_structure():
    assert len(pv.CATALOG) == 20
    ids = [c.id for c in pv.CATALOG]
    assert len(set(ids)) == 20
    framings = {c.framing for c in pv.CATALOG}
    assert framings == {pv.FRAMING_I_INTO_V1, pv.FRAMING_I_INTO_V2}
    with pytest.raises(KeyError):
        pv.convention_by_id("nonexistent")


def test_catalog_file_matches_generated_table():
    shipped = (Path(pv.__file__).parent / "conventions.txt").read_text()
    assert shipped == pv.catalog_table_text()
    assert f"version {pv.CATALOG_VERSION}" in shipped


# -- equation ------------------------------------------------------------------

def test_residual_trivial_cases():
    zero = scalar_datum(b1=0, b2=0, d=0, i=0, j=0)
    assert pv.perverse_residual(zero, SURVIVOR).is_zero()
    empty = n2_zero_datum([[1]], 1)
    assert pv.perverse_residual(empty, SURVIVOR).nrows == 0
    assert pv.is_perverse_solution(empty, SURVIVOR)


def test_plain_equation_vanishes_when_b1_equals_b2():
    rng = SplitRng("antisym")
    b = Matrix.random(F101, 2, 3, rng)
    d = Matrix.random(F101, 3, 2, rng)
    p = pv.PerverseDatum(3, 2, 1, b, b, d,
                         Matrix.random(F101, 2, 1, rng),
                         Matrix.random(F101, 1, 3, rng))
    assert pv.perverse_residual(p, pv.convention_by_id("iv2-plain-pair")).is_zero()


def test_framed_equation_includes_framing_term():
    p = scalar_datum(b1=0, b2=0, d=0, i=2, j=3)
    assert pv.perverse_residual(p, SURVIVOR) == Matrix(F101, [[6]])
    assert pv.is_perverse_solution(p, PLAIN)
    assert not pv.is_perverse_solution(p, SURVIVOR)


def test_literal_framing_uses_two_equations():
    f = F101
    p = pv.PerverseDatum(1, 1, 1, Matrix(f, [[0]]), Matrix(f, [[0]]),
                         Matrix(f, [[0]]), Matrix(f, [[2]]), Matrix(f, [[3]]))
    comps = pv.equation_residuals(p, pv.convention_by_id("iv1-framed-pair-jB1-B1i"))
    assert len(comps) == 2
    assert comps[1] == Matrix(f, [[6]])


# -- stability -----------------------------------------------------------------

def test_stability_examples_under_survivor():
    assert pv.is_perverse_stable(scalar_datum(d=1, j=1), SURVIVOR)
    assert not pv.is_perverse_stable(scalar_datum(d=0, j=1), SURVIVOR)
    assert not pv.is_perverse_stable(scalar_datum(d=1, j=0), SURVIVOR)


def test_stability_verdicts_differ_between_catalog_entries():
    # d = 0 leaves ker(d) = V2 closed with S1 = 0: only the pair form rejects it.
    p = scalar_datum(d=0, j=1)
    assert pv.is_perverse_stable(p, V1_ONLY)
    assert not pv.is_perverse_stable(p, SURVIVOR)


def test_stability_trivial_sizes():
    f = F2
    empty = pv.PerverseDatum(0, 0, 2, Matrix.zeros(f, 0, 0), Matrix.zeros(f, 0, 0),
                             Matrix.zeros(f, 0, 0), Matrix.zeros(f, 0, 2),
                             Matrix.zeros(f, 2, 0))
    assert pv.is_perverse_stable(empty, SURVIVOR)
    assert pv.is_perverse_stable(n2_zero_datum([[1, 0], [0, 1]], 2), SURVIVOR)
    assert not pv.is_perverse_stable(n2_zero_datum([[1, 0]], 1), SURVIVOR)


def test_d_injective():
    assert pv.d_injective(n2_zero_datum([[1]], 1))      # empty d
    assert pv.d_injective(scalar_datum(d=5))
    assert not pv.d_injective(scalar_datum(d=0))


# -- projections -----------------------------------------------------------------

def test_zeta_eta_at_n2_zero():
    p = n2_zero_datum([[1, 0], [0, 1]], 2)
    z = pv.zeta(p, SURVIVOR)
    assert z.n == 2 and z.r == 2
    assert z.X.is_zero() and z.Y.is_zero() and z.i.is_zero()
    assert z.j == p.j and z.is_stable()
    h = pv.eta(p, SURVIVOR)
    assert h.n == 0 and h.r == 2 and h.is_stable()


def test_projection_preconditions():
    with pytest.raises(ValueError):
        pv.zeta(scalar_datum(d=1, j=0), SURVIVOR)       # unstable
    with pytest.raises(ValueError):
        pv.zeta(scalar_datum(i=1, j=1, d=1), SURVIVOR)  # not a solution
    ok = scalar_datum(b1=3, b2=4, d=1, i=0, j=2)
    assert pv.zeta(ok, SURVIVOR).is_solution()
    assert pv.eta(ok, SURVIVOR).is_solution()


def test_plain_equation_convention_violates_postcondition():
    p = scalar_datum(b1=1, b2=2, d=1, i=1, j=1)
    assert pv.is_perverse_solution(p, PLAIN)
    assert pv.is_perverse_stable(p, PLAIN)
    with pytest.raises(pv.ConventionViolation):
        pv.zeta(p, PLAIN)


def test_conjugation_for_square_invertible_d():
    rng = SplitRng("conj")
    count = 0
    for p in pv.enumerate_stable_solutions(GF(3), 1, 1, 1, SURVIVOR, cap=20):
        z = pv.zeta(p, SURVIVOR)
        h = pv.eta(p, SURVIVOR)
        for t in range(3):
            x = GF(3).random(rng.child(count, t))
            y = GF(3).random(rng.child(count, t, 1))
            assert (z.universal_complex_at(x, y).h0
                    == h.universal_complex_at(x, y).h0)
        count += 1
    assert count > 0


# -- tangent dimensions -----------------------------------------------------------

def test_tangent_point_case():
    p = pv.PerverseDatum(1, 0, 1, Matrix.zeros(F101, 0, 1), Matrix.zeros(F101, 0, 1),
                         Matrix.zeros(F101, 1, 0), Matrix.zeros(F101, 0, 1),
                         Matrix(F101, [[1]]))
    assert pv.perverse_tangent_dimension(p, SURVIVOR) == 0
    assert quiver_moduli_dimension(1, 0, 1) == 0


def test_tangent_on_lifted_sample():
    base = direct_sum(partition_witness(Partition((1,)), F101),
                      partition_witness(Partition((1,)), F101))
    lift = pv.datum_from_framed(base, 1, SplitRng("lift"))
    assert lift is not None
    assert pv.is_perverse_solution(lift, SURVIVOR)
    assert pv.is_perverse_stable(lift, SURVIVOR)
    assert pv.perverse_tangent_dimension(lift, SURVIVOR) == 5
    assert quiver_moduli_dimension(2, 1, 2) == 5


def test_datum_from_framed_roundtrip():
    for parts in ((1,), (2,), (2, 1)):
        base = partition_witness(Partition(parts), F101)
        n2 = max(1, base.n - 1)
        lift = pv.datum_from_framed(base, n2, SplitRng("roundtrip", parts))
        if lift is None:
            continue
        z = pv.zeta(lift, SURVIVOR)
        assert (z.X, z.Y, z.i, z.j) == (base.X, base.Y, base.i, base.j)


def test_fiber_count_matches_grassmannian_of_h1():
    for a in _framed_fiber_bases(F2, 2, 1, limit=2):
        h1 = a.universal_complex_at(0, 0).h1
        expected = general_linear_order(1, 2) * gaussian_binomial(h1, 1, 2)
        assert pv.zeta_fiber_count(a, 1, SURVIVOR) == expected


# -- benchmarks and the search -----------------------------------------------------

def test_n2_zero_benchmark_for_survivor():
    ok, details = pv.n2_zero_benchmark_results(SURVIVOR)
    assert ok, details


def test_every_stable_solution_has_injective_d():
    for (n1, n2, r) in ((1, 1, 1), (2, 1, 1)):
        found = pv.enumerate_stable_solutions(F2, n1, n2, r, SURVIVOR)
        assert found
        assert all(pv.d_injective(p) for p in found)


def test_count_correspondence_for_survivor_small():
    ok, details = pv.count_correspondence_results(SURVIVOR, {})
    assert ok, details


def test_search_isolates_unique_convention(search_result):
    assert search_result.survivors == ["iv2-framed-pair"]
    assert search_result.unique is SURVIVOR or search_result.unique.id == SURVIVOR.id
    assert not search_result.ambiguous
    record = search_result.entries["iv1-plain-v1_only-jB1-B1i"]
    assert not record["criteria"]["b_n2_zero_grassmannian"]["passed"]
    plain = search_result.entries["iv2-plain-pair"]
    assert plain["criteria"]["b_n2_zero_grassmannian"]["passed"]
    assert not plain["criteria"]["a_projection_postconditions"]["passed"]
    weak = search_result.entries["iv2-framed-v1_only"]
    assert weak["criteria"]["c_tangent_dimension"]["passed"]
    assert not weak["criteria"]["d_count_correspondence"]["passed"]


def test_framing_shape_validation():
    p = scalar_datum()
    p.validate_framing(pv.FRAMING_I_INTO_V2)
    # i attached to V1 (shape n1 x r) fails validation under the V2 framing.
    swapped = pv.PerverseDatum(2, 1, 1, Matrix.zeros(F2, 1, 2), Matrix.zeros(F2, 1, 2),
                               Matrix.zeros(F2, 2, 1), Matrix.zeros(F2, 2, 1),
                               Matrix.zeros(F2, 1, 1))
    swapped.validate_framing(pv.FRAMING_I_INTO_V1)
    with pytest.raises(ValueError):
        swapped.validate_framing(pv.FRAMING_I_INTO_V2)
