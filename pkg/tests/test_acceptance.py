"""Acceptance suite: every criterion at its stated size and tolerance.

Each criterion is exact (zero tolerance).  One test per criterion, so the
verbose pytest run shows one pass/fail line per criterion; each test also
prints its own summary line.
"""

import pytest

from degenlab import acceptance

SEED = 0


def _run(label, fn):
    checks = fn(SEED)
    failures = [c for c in checks if not c.passed]
    print(f"{'PASS' if not failures else 'FAIL'}  criterion {label} "
          f"({len(checks)} checks)")
    detail = "\n".join(f"{c.name}: {c.details}" for c in failures[:5])
    assert not failures, f"criterion {label} failed:\n{detail}"
    return checks


def test_c01_rank_count_exactness():
    checks = _run("01 rank-count exactness",
                  acceptance.criterion_01_rank_count_exactness)
    # m, n <= 3 at q in {2, 3}: 9 families x 2 primes.
    assert len(checks) == 18


def test_c02_codimension_law():
    _run("02 codimension law", acceptance.criterion_02_codimension_law)


def test_c03_fredholm_duality_invariants():
    checks = _run("03 fredholm and duality invariants",
                  acceptance.criterion_03_fredholm_duality)
    randomized = [c for c in checks if "random" in c.name]
    assert all(c.details["samples"] == 10_000 for c in randomized)
    assert len(randomized) == 3


def test_c04_incidence_dimension():
    _run("04 incidence dimension", acceptance.criterion_04_incidence_dimension)


def test_c05_birationality_and_window():
    checks = _run("05 birationality and isomorphism window",
                  acceptance.criterion_05_birational_window)
    assert any(c.name.startswith("isomorphism-window V_2,2 d+=2 d-=2")
               for c in checks)


def test_c06_adhm_smoothness():
    checks = _run("06 framed-quiver smoothness 2rn",
                  acceptance.criterion_06_adhm_smoothness)
    assert checks[0].details["samples"] == 100


def test_c07_rank1_witness_law():
    _run("07 rank-1 witness law", acceptance.criterion_07_rank1_witness_law)


def test_c08_rank2_criterion_probe():
    checks = _run("08 rank-2 criterion probe", acceptance.criterion_08_rank2_probe)
    # Both directions must have been exercised.
    outcomes = {c.details["predicted_nonempty"] for c in checks}
    assert outcomes == {True, False}
    budgets = {c.details["trace"]["random_budget"] for c in checks}
    assert budgets == {10_000}


def test_c09_perverse_benchmarks():
    checks = _run("09 blow-up quiver benchmarks",
                  acceptance.criterion_09_perverse_benchmarks)
    outcome = checks[0]
    survivors = outcome.details["survivors"]
    assert survivors or outcome.details["ambiguous"] is True
    # Benchmarks below ran under every surviving convention.
    for conv_id in survivors:
        assert any(c.name == f"perverse-n2-zero [{conv_id}]" for c in checks)
        assert any(c.name == f"perverse-tangent [{conv_id}]" for c in checks)


def test_c10_numerology_identities():
    _run("10 numerology identities", acceptance.criterion_10_numerology)


def test_corrupted_budget_fails_loudly():
    checks = acceptance.criterion_01_rank_count_exactness(SEED, budget=0)
    assert all(not c.passed for c in checks)
    assert all("refused" in c.details for c in checks)


@pytest.mark.parametrize("criterion", [c[0] for c in acceptance.CRITERIA])
def test_suite_covers_all_criteria(criterion):
    assert any(criterion == label for label, _ in acceptance.CRITERIA)
