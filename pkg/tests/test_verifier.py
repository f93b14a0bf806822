from __future__ import annotations

import jsonschema
import pytest

from geode.cli import schema
from geode.core import GeodeTable, geode_table
from geode.recurrence import IndexPolynomial, PureRecurrence, RationalCoeff, RecurrenceSystem
from geode.verifier import (EVIDENCE_NOTE, cube, random_points, verify, verify_compatibility,
                            verify_divisibility, verify_identity, verify_recurrence, verify_window)
from helpers import expected_2d, perturb, random_mutations

validate = jsonschema.Draft202012Validator(schema("verification_report")).validate


def test_cube():
    pts = cube(3, 4)
    assert len(pts) == 64 and pts[0] == (0, 0, 0)
    assert [sum(p) for p in pts] == sorted(sum(p) for p in pts)


def test_window_passes(system3, table3_21):
    rep = verify_window(system3, 8, table=table3_21)
    assert rep.passed, rep.as_dict()
    names = [c.name for c in rep.checks]
    assert names == ["window_agreement", "relation_direction_1", "relation_direction_2",
                     "relation_direction_3", "defining_identity_residual"]
    agree = rep.checks[0]
    assert agree.parameters["points"] == 512 and not agree.parameters["vacuous"]
    assert agree.note == EVIDENCE_NOTE and "not computed" in agree.note
    validate(rep.as_dict())


def test_small_window_flagged_vacuous(system3):
    rep = verify_window(system3, 2)
    assert rep.passed
    assert rep.checks[0].parameters["vacuous"]
    assert "window too small" in rep.checks[0].note


def test_single_perturbation_caught(system3):
    rec = system3.recurrences[2]
    site = (1, "denominator", next(iter(rec.coeffs[1].denominator.terms)))
    recs = dict(system3.recurrences)
    recs[2] = perturb(rec, site)
    rep = verify_window(RecurrenceSystem(recs.values(), system3.window_size), 6)
    assert not rep.passed
    for c in rep.failures():
        assert c.counterexample and "point" in c.counterexample
    validate(rep.as_dict())


def test_mutation_fuzzing(system3):
    table = geode_table(15, 3)
    missed = []
    for d, site, delta, mutated in random_mutations(system3, 50, seed=2024):
        if verify_window(mutated, 6, table=table).passed:
            missed.append((d, site, delta))
    assert not missed


def test_identity_examples():
    rep = verify_identity(geode_table(1, 3))
    assert rep.passed and rep.checks[0].parameters["points"] == 3


@pytest.mark.parametrize("k, n", [(2, 12), (3, 15), (4, 12), (2, 20), (3, 20)])
def test_identity_holds(k, n):
    assert verify_identity(geode_table(n, k)).passed


def test_identity_failure_has_point():
    values = dict(geode_table(6, 3))
    values[(2, 1, 1)] += 1
    rep = verify_identity(GeodeTable(3, values, complete_to=6))
    assert not rep.passed
    assert rep.checks[0].counterexample["point"] in ([2, 1, 1], [3, 1, 1], [2, 2, 1], [2, 1, 2])
    validate(rep.as_dict())
    with pytest.raises(ValueError):
        verify_identity(GeodeTable(3, values))


@pytest.mark.parametrize("n_max, k", [(12, 2), (12, 3), (12, 4), (8, 5)])
def test_divisibility(n_max, k):
    assert verify_divisibility(n_max, k).passed


def test_random_points_reproducible():
    a = random_points(3, 20, 50, seed=5)
    assert a == random_points(3, 20, 50, seed=5)
    assert len(set(a)) == 50 and all(sum(p) <= 20 for p in a)


def test_compatibility(system3):
    rep = verify_compatibility(system3, random_points(3, 20, 50, seed=1))
    assert rep.passed and rep.checks[0].parameters["orderings"] == 6
    validate(rep.as_dict())


def test_compatibility_catches_perturbation(system3):
    rec = system3.recurrences[3]
    site = (0, "numerator", next(iter(rec.coeffs[0].numerator.terms)))
    recs = dict(system3.recurrences)
    recs[3] = perturb(rec, site)
    mutated = RecurrenceSystem(recs.values(), system3.window_size)
    rep = verify_compatibility(mutated, random_points(3, 20, 50, seed=1))
    assert not rep.passed and rep.checks[0].counterexample["point"]


def test_single_direction_trivially_compatible():
    n = IndexPolynomial.variable(1, 0)
    # G(n) = Catalan(n+1), so G(n) / G(n-1) = 2(2n+1)/(n+2)
    rec = PureRecurrence(1, 1, (RationalCoeff(2 * (2 * n + 1), n + 2),))
    sys1 = RecurrenceSystem([rec])
    assert verify_compatibility(sys1, [(5,), (9,)]).passed
    assert verify_window(sys1, 12).passed


def test_2d_system_window():
    assert verify_window(RecurrenceSystem([expected_2d(1), expected_2d(2)]), 12).passed


def test_verify_recurrence(system3, diagonal3):
    rep = verify_recurrence(diagonal3, 9)
    assert rep.passed and [c.name for c in rep.checks] == ["relation_diagonal",
                                                            "diagonal_agreement"]
    assert verify_recurrence(system3.recurrences[1], 6).passed
    assert verify(expected_2d(2), 10).passed
    bad = perturb(diagonal3, (0, "numerator", next(iter(diagonal3.coeffs[0].numerator.terms))))
    rep = verify(bad, 9)
    assert not rep.passed
    validate(rep.as_dict())
