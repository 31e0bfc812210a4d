import json

import pytest
from hypothesis import given, strategies as st

from rqlab.arith import jacobi
from rqlab.suites import case2_family, pq_family
from rqlab.verdict import (
    T_CASE1,
    T_CASE2,
    InvariantRecord,
    Verdict,
    azizi_condition,
    azizi_predicts_sqrt,
    build_record,
    classify_case,
    decide,
    evaluate,
    scholz_classify,
)

CASE1 = pq_family(30000)
CASE1_Q5 = pq_family(30000, (5, 8), (5, 8))
CASE2 = case2_family(30000)


def test_classify_case():
    assert classify_case(15).case == "Case1-q3mod4"
    assert classify_case(65).case == "Case1-q5mod8"
    assert classify_case(85).case == "Case3" and classify_case(85).q == 17
    assert classify_case(205).case == "OutOfScope"  # (2/41)_4 = (41/2)_4
    t = classify_case(9645)
    assert (t.case, t.p, t.q1, t.q2) == ("Case2", 5, 3, 643)
    assert classify_case(30).case == "OutOfScope"
    assert classify_case(3 * 7 * 13).case == "Case2"
    assert classify_case(7 * 13 * 23).case == "OutOfScope"  # no prime = 3 mod 8
    with pytest.raises(ValueError):
        classify_case(12)


def test_case1_q5_order():
    t = classify_case(5 * 13)
    assert (t.p, t.q) == (5, 13)


def test_scholz_branches():
    # (5/29) = 1, (5/29)_4 = (29/5)_4 = ... each branch at least once
    branches = {scholz_classify(p, q).branch for p, q in [(5, 13), (5, 29), (13, 17), (5, 41), (17, 53), (13, 61)]}
    assert "1" in branches
    assert scholz_classify(5, 13).branch == "1"
    assert scholz_classify(5, 13).matches(2, 2, -1)
    assert not scholz_classify(5, 13).matches(4, 2, 1)


def test_azizi_condition():
    pairs = [(p, q) for p in (5, 13, 29, 37) for q in (13, 29, 37, 53, 61) if p < q and jacobi(p, q) == -1]
    for p, q in pairs:
        assert azizi_condition(p, q) in (1, -1)
        assert azizi_predicts_sqrt(p, q) == (azizi_condition(p, q) == -1)
    with pytest.raises(ValueError):
        azizi_condition(5, 7)


def test_paper_examples():
    rec, v = evaluate(15)
    assert v.line() == f"X_inf = C2 (proven; {T_CASE1})"
    rec, v = evaluate(85)
    assert (v.kind, v.structure, v.confidence) == ("A0", [2], "proven")
    rec, v = evaluate(221)
    assert (v.kind, v.order) == ("A1", 4)
    assert rec.structure_2d == [4, 2] and rec.symbols["(2p/q)_4"] == -1
    rec, v = evaluate(9645)
    assert rec.pr1_square is True and rec.annotations
    rec, v = evaluate(2445)
    assert any("X_inf = A1" in n for n in v.notes)


def test_out_of_scope_record():
    rec, v = evaluate(205)
    assert rec.case == "OutOfScope" and v.kind == "undetermined"
    rec, v = evaluate(10)
    assert rec.fsu_case is None and v.kind == "undetermined"


@pytest.mark.parametrize("D", CASE2[:20])
def test_case2_verdicts(D):
    rec, v = evaluate(D)
    if rec.pr1_square is False:
        assert (v.kind, v.theorem, v.confidence) == ("A1", T_CASE2, "proven")
    else:
        assert v.theorem != T_CASE2


@given(st.sampled_from(CASE1))
def test_case1_family_property(D):
    rec, v = evaluate(D)
    assert rec.h2 == 2 and rec.a1 == 2 and v.structure == [2]


@given(st.sampled_from(CASE1_Q5))
def test_q5_family_consistent(D):
    rec, v = evaluate(D)
    if v.kind == "A0":
        assert v.order in (None, rec.h2) and rec.a1 == rec.h2
    if v.kind == "growth":
        assert rec.a1 == 2 * rec.h2


@given(st.sampled_from(CASE1 + CASE1_Q5 + CASE2 + [85, 221, 205, 10]))
def test_deterministic_and_serialisable(D):
    r1, v1 = evaluate(D)
    r2, v2 = build_record(D), None
    v2 = decide(r2)
    assert r1 == r2 and v1 == v2
    blob = json.dumps({"r": r1.to_dict(), "v": v1.to_dict()}, sort_keys=True)
    back = json.loads(blob)
    assert InvariantRecord.from_dict(back["r"]) == r1
    assert Verdict.from_dict(back["v"]) == v1
