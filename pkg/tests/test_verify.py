"""Tests for the invariant check catalog and its fault injection."""

import json

import pytest

from forestcalc.envelope import canonical_json
from forestcalc.verify import (
    BUDGETS,
    CHECKS,
    CheckResult,
    broken_square_demo,
    results_payload,
    run_checks,
)

CHECK_NAMES = [
    "partition-lattice-counts",
    "meet-join-lattice-laws",
    "image-partition-closure",
    "strictness-triple",
    "goodness-double-criterion",
    "badness-hereditary",
    "badness-pushforward",
    "tspace-wedge-ranks",
    "tspace-model-agreement",
    "tree-map-functoriality",
    "nice-filtration",
    "composition-closure",
    "aut-order-formula",
    "iso-class-count",
    "fat-reconstruction",
    "coend-euler-additivity",
    "cube-pushout-controls",
    "kernel-vs-dense-snf",
    "power-diagonal-routes",
]


def test_catalog_names_and_order_frozen():
    assert [name for name, _ in CHECKS] == CHECK_NAMES


def test_budgets_shape():
    assert set(BUDGETS) == {"quick", "exhaustive"}
    for level in BUDGETS.values():
        assert set(level) == {"support", "tree_support", "n", "table_n"}
    for key in BUDGETS["quick"]:
        assert BUDGETS["exhaustive"][key] >= BUDGETS["quick"][key]


def test_quick_level_all_pass():
    results = run_checks("quick")
    assert [r.name for r in results] == CHECK_NAMES
    failing = [r.name for r in results if not r.passed]
    assert failing == []
    for r in results:
        assert r.counterexample is None


def test_fault_injection_trips_exactly_one_check():
    results = run_checks("quick", inject_fault=True)
    failing = [r for r in results if not r.passed]
    assert [r.name for r in failing] == ["strictness-triple"]
    assert failing[0].counterexample is not None
    assert "morphism" in failing[0].counterexample


def test_unknown_level_rejected():
    with pytest.raises(ValueError):
        run_checks("paranoid")


def test_results_payload_shape():
    results = [
        CheckResult(name="a", passed=True, details={"k": 1}),
        CheckResult(name="b", passed=False, counterexample={"x": 0}),
    ]
    payload = results_payload(results, "quick")
    assert payload["level"] == "quick"
    assert payload["passed"] is False
    assert payload["checks"][0] == {"name": "a", "passed": True, "details": {"k": 1}}
    assert payload["checks"][1]["counterexample"] == {"x": 0}
    # payload must serialize canonically
    json.loads(canonical_json(payload))


def test_quick_run_deterministic():
    one = results_payload(run_checks("quick"), "quick")
    two = results_payload(run_checks("quick"), "quick")
    assert canonical_json(one) == canonical_json(two)


def test_broken_square_detected():
    acyclic, result = broken_square_demo()
    assert not acyclic
    assert result.group(1).rank == 1
    assert result.euler() == -1
