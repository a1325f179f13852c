"""Framed quiver data: stability, the pointwise complex, witnesses, samplers."""

import pytest

from degenlab.adhm import (ADHMDatum, Partition, WitnessSearch, direct_sum,
                           degeneracy_witness_search, empty_datum,
                           enumerate_stable_solutions, generator_count_oracle,
                           iter_adhm_data, max_generator_count, partition_witness,
                           partitions_of, sample_stable)
from degenlab.counting import BudgetExceeded
from degenlab.fields import GF
from degenlab.matrices import Matrix
from degenlab.numerology import CriterionInput, criterion_nonempty
from degenlab.rng import SplitRng

F101 = GF(101)


def scalar_datum(j_value=1, i_value=0, x=0, y=0, field=F101):
    f = field
    return ADHMDatum(1, 1, Matrix(f, [[x]]), Matrix(f, [[y]]),
                     Matrix(f, [[i_value]]), Matrix(f, [[j_value]]))


def test_residual_trivial_cases():
    assert scalar_datum().residual().is_zero()
    d = scalar_datum(i_value=3, j_value=2)
    assert d.residual() == Matrix(F101, [[6]])
    assert not d.is_solution()


def test_stability_examples():
    assert scalar_datum(j_value=1).is_stable()
    assert not scalar_datum(j_value=0).is_stable()
    assert empty_datum(F101, 2).is_stable()


def test_partition_witness_smallest_case():
    w = partition_witness(Partition((1,)), F101)
    assert w.X.is_zero() and w.Y.is_zero() and w.i.is_zero()
    assert w.j == Matrix(F101, [[1]])


def test_partition_validation():
    with pytest.raises(ValueError):
        Partition((1, 2))
    with pytest.raises(ValueError):
        Partition((2, 0))


def test_partition_count():
    assert sum(1 for _ in partitions_of(5)) == 7
    assert sum(1 for _ in partitions_of(8)) == 22
    assert next(iter(partitions_of(0))).parts == ()


def test_generator_oracle_values():
    assert generator_count_oracle(Partition(())) == 1
    assert generator_count_oracle(Partition((1,))) == 2
    assert generator_count_oracle(Partition((2, 1))) == 3
    assert generator_count_oracle(Partition((4, 3, 2, 1))) == 5
    assert max_generator_count(3) == 3
    assert max_generator_count(8) == 4


def test_partition_witness_scan():
    for n in range(0, 7):
        for p in partitions_of(n):
            w = partition_witness(p, F101)
            assert w.is_solution() and w.is_stable()
            assert w.degeneracy_index_at(0, 0) == generator_count_oracle(p)


def test_universal_complex_frozen_values():
    d = scalar_datum()
    assert d.universal_complex_at(0, 0).cohomology() == (2, 1)
    assert d.universal_complex_at(1, 0).cohomology() == (1, 0)
    assert empty_datum(F101, 3).universal_complex_at(4, 5).cohomology() == (3, 0)


def test_universal_complex_refused_off_solutions():
    with pytest.raises(ValueError):
        scalar_datum(i_value=1, j_value=1).universal_complex_at(0, 0)


def test_tangent_dimension_values():
    assert scalar_datum().tangent_dimension() == 2
    assert empty_datum(F101, 2).tangent_dimension() == 0
    rng = SplitRng("tangent")
    datum = sample_stable(2, 2, rng, F101).datum
    assert datum.tangent_dimension() == 8


def test_tangent_refused_at_unstable_points():
    with pytest.raises(ValueError):
        scalar_datum(j_value=0).tangent_dimension()


def test_gauge_and_translate_preserve_everything():
    rng = SplitRng("gauge")
    datum = sample_stable(3, 2, rng, F101).datum
    from degenlab.matrices import random_invertible
    g = random_invertible(F101, 3, rng)
    moved = datum.gauge(g).translate(7, 11)
    assert moved.is_solution() and moved.is_stable()
    assert moved.tangent_dimension() == datum.tangent_dimension()


def test_sampler_postconditions():
    rng = SplitRng("sampler")
    for t in range(30):
        sub = rng.child(t)
        n = 1 + sub.randbelow(3)
        r = 1 + sub.randbelow(2)
        res = sample_stable(n, r, sub, F101)
        assert res.found, (n, r)
        assert res.datum.is_solution() and res.datum.is_stable()


def test_fredholm_index_on_1000_sampled_data():
    rng = SplitRng("fredholm-index")
    for t in range(1000):
        sub = rng.child(t)
        n = sub.randbelow(4)
        r = 1 + sub.randbelow(2)
        datum = sample_stable(n, r, sub, F101).datum
        point = datum.universal_complex_at(F101.random(sub), F101.random(sub))
        h0, h1 = point.cohomology()
        assert h0 - h1 == r


def test_direct_sum_of_two_points_is_checked_not_assumed():
    w = partition_witness(Partition((1,)), F101)
    summed = direct_sum(w, w)
    assert summed.n == 2 and summed.r == 2
    assert summed.is_solution() and summed.is_stable()
    assert summed.degeneracy_index_at(0, 0) == 4


def test_exhaustive_tiny_sampler_f2():
    res = sample_stable(1, 1, SplitRng("tiny"), GF(2), strategy="exhaustive_tiny")
    assert res.found and res.attempts <= 16
    stable = enumerate_stable_solutions(GF(2), 1, 1)
    assert all(d.is_solution() and d.is_stable() for d in stable)
    # Over F_2: X, Y free, j = 1 forced, then i j = 0 forces i = 0.
    assert len(stable) == 4


def test_enumeration_budget():
    with pytest.raises(BudgetExceeded):
        list(iter_adhm_data(GF(2), 3, 2, budget=1 << 10))


def test_witness_search_found_and_exhausted():
    rng = SplitRng("witness")
    hit = degeneracy_witness_search(1, 3, 3, rng.child(0), F101, random_attempts=10)
    assert hit.found and hit.phase == "structured" and hit.h0 == 3
    assert hit.witness.is_stable()
    miss = degeneracy_witness_search(1, 3, 4, rng.child(1), F101, random_attempts=25)
    assert not miss.found
    assert miss.trace["random_attempts"] == 25
    tiny = degeneracy_witness_search(1, 1, 2, rng.child(2), F101, random_attempts=10)
    assert tiny.found and tiny.h0 == 2


def test_witness_search_matches_criterion_rank1():
    rng = SplitRng("criterion")
    for n in range(0, 5):
        for l in range(0, max_generator_count(max(n, 1)) + 3):
            predicted = criterion_nonempty(CriterionInput(0, 0, 1, n, l))
            result = degeneracy_witness_search(1, n, l, rng.child(n, l), F101,
                                               random_attempts=10)
            assert result.found == predicted, (n, l)


def test_shape_validation():
    f = GF(5)
    with pytest.raises(ValueError):
        ADHMDatum(2, 1, Matrix.zeros(f, 2, 2), Matrix.zeros(f, 2, 2),
                  Matrix.zeros(f, 1, 2), Matrix.zeros(f, 1, 2))
