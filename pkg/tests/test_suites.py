import json

import pytest

from webcalc import suites
from webcalc.rep_engine import LeviDatum
from webcalc.suites import Bounds, Instance, UnknownSuite

SMALL = Bounds(n_max=2, label_max=2, width_max=2, m_max=2)


def test_unknown_suite():
    with pytest.raises(UnknownSuite):
        suites.run_suite("no_such_suite")


@pytest.mark.parametrize("name", suites.SUITES)
def test_small_bounds_pass(name):
    records = suites.run_suite(name, SMALL, seed=3, timing=False)
    assert records
    bad = [r["instance"] for r in records if r["status"] != "pass"]
    assert not bad


def test_reports_are_byte_stable():
    a = suites.report_lines(suites.run_suite("annular_relations", SMALL, seed=5, timing=False))
    b = suites.report_lines(suites.run_suite("annular_relations", SMALL, seed=5, timing=False))
    assert a == b


def test_records_are_ordered_by_key():
    keys = [r["instance"] for r in suites.run_suite("planar_relations", SMALL, timing=False)]
    assert keys == sorted(keys)
    assert len(set(keys)) == len(keys)


def test_record_fields():
    (rec,) = suites.run_suite("circle_evaluation", SMALL, timing=True, only=lambda i: i.key == min(
        x.key for x in suites.suite_spec("circle_evaluation", SMALL).instances))
    assert set(rec) == {"suite", "instance", "params", "status", "elapsed_ms", "detail"}
    assert isinstance(rec["elapsed_ms"], int)
    json.dumps(rec)


def test_wrong_relation_reports_counterexample():
    ctx = LeviDatum(2)
    # digon removal without its [2] factor
    inst = Instance("mutated", {}, suites._term_check("split(1,1) ; merge(1,1)", "id([2])", ctx))
    rec = suites.run_instance("test", inst, timing=False)
    assert rec["status"] == "fail"
    assert {"lhs_matrix", "rhs_matrix"} <= set(rec["detail"])


def test_type_mismatch_is_a_failure_not_a_crash():
    ctx = LeviDatum(2)
    inst = Instance("mismatch", {}, suites._term_check("merge(1,1)", "id([1,1])", ctx))
    rec = suites.run_instance("test", inst, timing=False)
    assert rec["status"] == "fail"
    assert rec["detail"]["reason"] == "type mismatch"


def test_crashing_instance_is_reported():
    def boom():
        raise RuntimeError("nope")
    rec = suites.run_instance("test", Instance("boom", {}, boom), timing=False)
    assert rec["status"] == "error"
    assert not suites.all_passed([rec])
    assert suites.summarize([rec]) == {"error": 1}


def test_dumbbell_expansion_is_well_typed():
    from webcalc.web_ir import parse, typecheck
    for k, l, r in [(1, 1, 1), (2, 1, 1), (2, 2, 3)]:
        assert typecheck(parse(suites.dumbbell_terms(k, l, r, "over"))) == ((k, l), (r, k + l - r))
