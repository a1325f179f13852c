"""Determinantal family: strata counts, classical point counts, dimensions."""

import pytest

from degenlab.counting import BudgetExceeded
from degenlab.determinantal import (DEFAULT_BUDGET, FamilySpec, codim_law_checks,
                                    degeneracy_count, degeneracy_count_by_enumeration,
                                    degeneracy_polynomial, grassmannian_count,
                                    grassmannian_count_by_enumeration,
                                    grassmannian_dual_count, incidence_count,
                                    incidence_count_by_enumeration, rank_counts,
                                    rank_counts_by_enumeration, rank_counts_by_formula,
                                    stratified_identity_checks, verify_dimension_claims)


def test_rank_counts_frozen_2x2():
    table = rank_counts_by_enumeration(FamilySpec(2, 2, 2))
    assert table.counts == {0: 1, 1: 9, 2: 6}
    assert table.total() == 16


def test_rank_counts_1x1_any_q():
    for q in (2, 3, 5):
        assert rank_counts_by_enumeration(FamilySpec(1, 1, q)).counts == {0: 1, 1: q - 1}


def test_formula_matches_enumeration():
    for (m, n, q) in ((2, 2, 2), (2, 2, 3), (2, 3, 3), (3, 3, 2), (1, 3, 3)):
        enum = rank_counts_by_enumeration(FamilySpec(m, n, q))
        assert enum.counts == rank_counts_by_formula(m, n, q).counts


def test_partitioned_enumeration_merges_to_full_table():
    spec = FamilySpec(2, 2, 3)
    full = rank_counts_by_enumeration(spec)
    size = spec.size
    cut = size // 3
    parts = [rank_counts_by_enumeration(spec, (lo, hi))
             for lo, hi in ((0, cut), (cut, 2 * cut), (2 * cut, size))]
    merged = parts[0].merge(parts[1]).merge(parts[2])
    assert merged.counts == full.counts


def test_partitioned_counts_independent_of_parallelism():
    from degenlab.determinantal import rank_counts_partitioned
    spec = FamilySpec(2, 2, 3)
    serial = rank_counts_partitioned(spec, jobs=1)
    threaded = rank_counts_partitioned(spec, jobs=2)
    assert serial.counts == threaded.counts == rank_counts_by_enumeration(spec).counts
    assert serial.records()[0] == {"family": "V_2,2/F_3", "q": 3,
                                   "label": "0", "count": 1}


def test_budget_refusal_reports_required_size():
    spec = FamilySpec(3, 3, 7)
    assert spec.size > DEFAULT_BUDGET
    with pytest.raises(BudgetExceeded) as exc:
        rank_counts_by_enumeration(spec)
    assert exc.value.required == 7 ** 9
    assert rank_counts(spec, method="auto").counts == rank_counts_by_formula(3, 3, 7).counts


def test_grassmannian_counts_v12():
    for q in (2, 3, 5):
        expected = q * q + q
        assert grassmannian_count(1, 2, 1, q) == expected
        assert grassmannian_count_by_enumeration(FamilySpec(1, 2, q), 1) == expected


def test_grassmannian_d0_is_the_whole_family():
    for (m, n, q) in ((1, 2, 3), (2, 2, 2), (2, 3, 2)):
        assert grassmannian_count(m, n, 0, q) == q ** (m * n)


def test_incidence_v11_only_origin_contributes():
    for q in (2, 3, 5):
        assert incidence_count(1, 1, 1, 1, q) == 1
        assert incidence_count_by_enumeration(FamilySpec(1, 1, q), 1, 1) == 1


def test_incidence_requires_nonnegative_rank_orientation():
    with pytest.raises(ValueError):
        incidence_count(3, 2, 1, 1, 2)


def test_incidence_with_no_dual_quotient_is_grassmannian():
    for q in (2, 3, 5):
        assert incidence_count(1, 2, 1, 0, q) == grassmannian_count(1, 2, 1, q)


def test_stratified_identity_enumeration_vs_strata():
    checks = stratified_identity_checks(2, 2, 2, d_pairs=((1, 0), (1, 1), (2, 1)))
    assert all(c.passed for c in checks)


def test_degeneracy_counts_and_duality_shift():
    for q in (2, 3):
        assert degeneracy_count(2, 2, 0, q) == q ** 4
        assert degeneracy_count(2, 2, 1, q) == degeneracy_count_by_enumeration(
            FamilySpec(2, 2, q), 1)
        # Corank l here equals corank l - e of the transposed family.
        assert degeneracy_count(2, 3, 2, q) == degeneracy_count(3, 2, 1, q)


def test_degeneracy_polynomial_frozen():
    poly, holdout_ok, holdout = degeneracy_polynomial(2, 2, 1)
    assert poly.degree == 3 and holdout_ok
    assert [int(c) for c in poly.coeffs] == [0, -1, 1, 1]


def test_codim_law_includes_empty_strata():
    checks = codim_law_checks(2, 2, ks=(0, 1, 2, 3))
    assert all(c.passed for c in checks)
    names = [c.name for c in checks]
    assert any("empty" in name for name in names)


def test_window_instance_2x2():
    checks = verify_dimension_claims(2, 2, 2, 2)
    window = [c for c in checks if c.name.startswith("isomorphism-window")]
    assert len(window) == 1 and window[0].passed
    counts = window[0].details["counts"]
    assert all(set(v.values()) == {1} for v in counts.values())


def test_birational_leading_terms_e1():
    checks = verify_dimension_claims(1, 2, 1, 0)
    lead = [c for c in checks if c.name.startswith("birational")]
    assert len(lead) == 1 and lead[0].passed
    inc = [c for c in checks if c.name.startswith("incidence-dim")]
    assert inc[0].passed and "d0" in inc[0].details


def test_family_spec_validation():
    with pytest.raises(ValueError):
        FamilySpec(2, 2, 4)
    with pytest.raises(ValueError):
        FamilySpec(0, 2, 2)
