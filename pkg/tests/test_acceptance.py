"""Acceptance gate: one test per criterion, exact (zero-tolerance) checks.

Each test runs the corresponding verification suite at the default seed,
prints a single pass/fail line, and enforces the stated wall-clock
budget where one applies.  The same suites back ``tstruct verify``.
"""

import pytest

from conftest import record
from tstruct import suites

BUDGETS = {
    "classification-round-trip": 10.0,
    "weak-cousin-necessity": 30.0,
    "weak-cousin-sufficiency": 300.0,
}


def _run(name):
    report = suites.ACCEPTANCE[name](suites.DEFAULT_SEED)
    verdict = "PASS" if report["ok"] else "FAIL"
    line = f"[acceptance] {name}: {verdict} ({report.get('seconds', 0)}s)"
    print(line)
    record(line)
    assert report["ok"], report
    budget = BUDGETS.get(name)
    if budget is not None:
        assert report["seconds"] < budget, (
            f"{name} exceeded its {budget}s budget: {report['seconds']}s"
        )
    return report


def test_criterion_1_classification_round_trip():
    report = _run("classification-round-trip")
    assert report["poset_census"] > 0 and report["z_census"] > 0


def test_criterion_2_weak_cousin_necessity():
    report = _run("weak-cousin-necessity")
    assert report["violating"] > 0


def test_criterion_3_weak_cousin_sufficiency():
    report = _run("weak-cousin-sufficiency")
    assert report["complexes"] >= 500
    assert report["pairs"] == report["census"] * report["complexes"]


def test_criterion_4_engine_oracle_agreement():
    report = _run("engine-oracle-agreement")
    assert report["complexes"] >= 500 and report["violating"] > 0


def test_criterion_5_generator_reduction():
    report = _run("generator-reduction")
    assert report["pairs"] == 200


def test_criterion_6_top_index():
    report = _run("top-index")
    assert report["pairs"] == 200


def test_criterion_7_duality_suite():
    report = _run("duality")
    assert report["samples"] == 200


def test_criterion_8_dual_filtration():
    _run("dual-filtration")


def test_criterion_9_discreteness():
    _run("discreteness")


@pytest.mark.parametrize("name", ["spectrum", "zmodules", "filtration",
                                  "truncation", "orthogonality"])
def test_module_invariant_suites(name):
    report = suites.run_suite(name)
    verdict = "PASS" if report["ok"] else "FAIL"
    line = f"[invariants] {name}: {verdict}"
    print(line)
    record(line)
    assert report["ok"], report
