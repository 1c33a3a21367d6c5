"""
Прогон свойств на случайном корпусе
"""

import pytest

from nagata.core.errors import NagataError
from nagata.services import suite

SAFE = ["mcshane", "convex", "barycentric", "dim_zero"]


def test_every_criterion_has_a_claim_and_a_size():
    assert set(suite.CRITERIA) == set(suite.CLAIMS) == set(suite.SUITE_SIZES)


def test_small_run_of_exact_criteria():
    report = suite.run_suite(seed=3, scale=0.01, only=SAFE)
    assert [check.name for check in report.checks] == SAFE
    assert report.instances["mcshane"] == 10
    assert report.instances["convex"] == 2
    assert report.all_passed


def test_only_keeps_the_registry_order():
    report = suite.run_suite(seed=0, scale=0.01, only=["convex", "mcshane"])
    assert [check.name for check in report.checks] == ["mcshane", "convex"]


def test_same_seed_same_instances():
    first = suite.run_suite(seed=11, scale=0.01, only=["barycentric", "dim_zero"])
    second = suite.run_suite(seed=11, scale=0.01, only=["barycentric", "dim_zero"])
    assert first.instances == second.instances
    assert first.skipped == second.skipped
    assert [c.measured for c in first.checks] == [c.measured for c in second.checks]


def test_unknown_criterion():
    with pytest.raises(NagataError):
        suite.run_suite(only=["mcshane", "teleport"])


def test_tower_criterion_runs():
    report = suite.run_suite(seed=5, scale=0.02, only=["towers"])
    assert report.instances["towers"] + report.skipped["towers"] >= 1


def test_full_size_exact_criteria():
    report = suite.run_suite(seed=0, scale=1.0, only=["mcshane", "dim_zero"])
    assert report.instances["mcshane"] == 2 * suite.SUITE_SIZES["mcshane"]
    assert report.check("mcshane").measured == 0
    assert report.check("dim_zero").measured == 0
    assert report.all_passed


def test_dimension_coherence_covers_the_functors():
    report = suite.run_suite(seed=2, scale=0.1, only=["dimension_coherence"])
    assert report.instances["dimension_coherence"] + report.skipped["dimension_coherence"] == 4
    assert report.all_passed
