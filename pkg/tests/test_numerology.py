"""Dimension formulas, criterion arithmetic and the blow-up calculus."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from degenlab import numerology as nm


def test_expected_codim():
    assert nm.expected_codim(-2, 0) == 0
    assert nm.expected_codim(0, 3) == 0
    assert nm.expected_codim(1, 0) == 1
    assert nm.expected_codim(3, 1) == 6


def test_vdim_inc_examples():
    assert nm.vdim_inc(7, 2, 0, 0) == 7
    assert nm.vdim_inc(4, 1, 1, 0) == 4
    for m, n, d in ((2, 2, 1), (2, 2, 2), (3, 3, 3)):
        assert nm.vdim_inc(m * n, 0, d, d) == m * n - d * d


@given(st.integers(0, 12), st.integers(0, 5), st.integers(0, 5))
def test_vdim_inc_matches_d0_when_e_is_1(dim_x, dp, dm):
    assert nm.vdim_inc(dim_x, 1, dp, dm) == nm.d0_virtual_dimension(dim_x, dp, dm)


@given(st.integers(0, 12), st.integers(0, 4), st.integers(0, 5), st.integers(0, 5))
def test_vdim_inc_vs_d0_discrepancy(dim_x, e, dp, dm):
    gap = nm.vdim_inc(dim_x, e, dp, dm) - nm.d0_virtual_dimension(dim_x, dp, dm)
    assert gap == (e - 1) * (dp - dm)


def test_criterion_examples():
    assert nm.criterion_nonempty(nm.CriterionInput(0, 0, 1, 3, 3))
    assert nm.criterion_value(nm.CriterionInput(0, 0, 1, 3, 3)) == 0
    assert not nm.criterion_nonempty(nm.CriterionInput(0, 0, 1, 3, 4))
    assert nm.criterion_value(nm.CriterionInput(0, 0, 1, 3, 4)) == -6
    # l = r: the remainder term cancels the l(r-l) term entirely.
    for const in (-3, 0, 7):
        for n in range(-3, 4):
            ci = nm.CriterionInput(const, 0, 2, n, 2)
            assert nm.criterion_value(ci) == const + 4 * n


def test_criterion_input_validation():
    with pytest.raises(ValueError):
        nm.CriterionInput(0, 0, 0, 1, 1)
    with pytest.raises(ValueError):
        nm.CriterionInput(0, 0, 2, 1, -1)


@given(st.integers(1, 5), st.integers(0, 25), st.integers(-10, 10),
       st.sampled_from([-3, 0, 7]))
def test_criterion_induction_identity(r, l, m, const):
    if l >= r:
        assert nm.criterion_induction_check(const, r, m, l)


def test_criterion_induction_requires_l_at_least_r():
    with pytest.raises(ValueError):
        nm.criterion_induction_check(0, 3, 1, 2)


def test_theta_table():
    assert nm.theta_table("K3_generic") == (0, 2)
    assert nm.theta_table("abelian") == (2, 4)
    assert nm.theta_table("framed_plane") == (0, 0)
    assert nm.theta_table("custom", 5) == (5, 7)
    with pytest.raises(ValueError):
        nm.theta_table("elliptic_fibration")
    with pytest.raises(ValueError):
        nm.theta_table("custom")


def test_quiver_moduli_dimension_values():
    assert nm.quiver_moduli_dimension(1, 0, 1) == 0
    assert nm.quiver_moduli_dimension(0, 0, 3) == 0
    assert nm.quiver_moduli_dimension(2, 1, 2) == 5
    # Substituting n1 = n, n2 = n - l reproduces the l-scaled candidate.
    for r in range(1, 4):
        for n in range(0, 5):
            for l in range(0, n + 1):
                assert (nm.quiver_moduli_dimension(n, n - l, r)
                        == nm.blowup_moduli_expected_dimension(0, r, n, l).l_scaled)


def test_blowup_moduli_expected_dimension_flags():
    both = nm.blowup_moduli_expected_dimension(0, 2, 3, 2)
    assert both.r_scaled == both.l_scaled and not both.discrepant
    l0 = nm.blowup_moduli_expected_dimension(1, 2, 3, 0)
    assert l0.r_scaled == 1 + 12 - 4 and l0.l_scaled == 1 + 12 and l0.discrepant
    small = nm.blowup_moduli_expected_dimension(0, 1, 2, 1)
    assert small.r_scaled == small.l_scaled == 2


GRAM = nm.make_gram([[2, -1], [-1, 2]])


def test_gram_validation():
    with pytest.raises(ValueError):
        nm.make_gram([[1, 2], [3, 4]])
    with pytest.raises(ValueError):
        nm.make_gram([[1, 2]])
    with pytest.raises(ValueError):
        nm.divisor_pairing((1,), (1,), GRAM)


def test_pushforward_relations():
    c_curve = nm.BlowupClass.make(0, (0, 0), 1, 0)
    assert nm.p_shriek(c_curve) == nm.SurfaceClass.make(0, (0, 0), Fraction(1, 2))
    assert nm.p_shriek(nm.BlowupClass.make(1, (0, 0), 0, 0)) == nm.SurfaceClass.make(1, (0, 0), 0)
    assert nm.p_shriek(nm.BlowupClass.make(0, (0, 0), 0, 1)) == nm.SurfaceClass.make(0, (0, 0), 1)
    assert nm.blowup_pairing(c_curve, c_curve, GRAM) == -1


@given(st.fractions(min_value=-5, max_value=5, max_denominator=4),
       st.fractions(min_value=-5, max_value=5, max_denominator=4),
       st.fractions(min_value=-5, max_value=5, max_denominator=4),
       st.fractions(min_value=-5, max_value=5, max_denominator=4))
def test_pushforward_pullback_identity(rank, d1, d2, point):
    cls = nm.SurfaceClass.make(rank, (d1, d2), point)
    assert nm.p_shriek(nm.p_star(cls)) == cls


def test_chern_character_and_twist():
    ch = nm.chern_character(2, (0, 0), 3, GRAM)
    assert ch == nm.SurfaceClass.make(2, (0, 0), -3)
    ch2 = nm.chern_character(1, (1, 0), 0, GRAM)
    assert ch2.point == Fraction(1)                     # c1^2/2 with c1^2 = 2
    vd = nm.blowup_chern_vector(ch, 2)
    assert vd == nm.BlowupClass.make(2, (0, 0), -2, -2)
    assert nm.blowup_chern_vector(ch, 0) == nm.p_star(ch)


def test_exceptional_twist_pushes_to_zero():
    twist = nm.exceptional_twist_class(2)
    assert nm.p_shriek(twist) == nm.SurfaceClass.make(0, (0, 0), 0)
