from __future__ import annotations

import json

import pytest

from mdsforge.checks import REGISTRY, fixture_linear_codes, run_suite


def test_registry_ids_are_descriptive():
    assert len(REGISTRY) == 12
    for cid, check in REGISTRY.items():
        assert cid == check.id and "-" in cid and check.claim


@pytest.mark.parametrize("cid", sorted(REGISTRY))
def test_each_check_passes_and_fault_flips_it(cid):
    clean = run_suite(max_q=5, only=[cid], random_per_case=5)[0]
    assert clean.passed, clean.details
    faulty = run_suite(max_q=5, only=[cid], inject_fault=cid, random_per_case=5)[0]
    assert not faulty.passed


def test_fault_is_isolated():
    ids = ["fixed-position-counts", "singleton-distance", "net-code-correspondence"]
    res = run_suite(max_q=4, only=ids, inject_fault="singleton-distance")
    assert {r.id: r.passed for r in res} == {
        "fixed-position-counts": True, "singleton-distance": False, "net-code-correspondence": True}


def test_results_are_deterministic():
    ids = ["plane-arc-sizes", "brs-identity", "primitive-sets"]
    a = [r.result_json() for r in run_suite(max_q=4, only=ids, random_per_case=10)]
    b = [r.result_json() for r in run_suite(max_q=4, only=ids, random_per_case=10, jobs=2)]
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_unknown_fault():
    with pytest.raises(KeyError):
        run_suite(only=["plane-arc-sizes"], inject_fault="nope")


def test_fixture_corpus_shape():
    corpus = fixture_linear_codes(4)
    assert any(l.k == 3 and l.n == 6 and l.field.q == 4 for l in corpus)
    assert all(l.n <= l.field.q + 2 for l in corpus)
