import os
import pathlib

import pytest

import deon

SCENARIOS = pathlib.Path(os.environ.get("DEON_SCENARIO_DIR", pathlib.Path(__file__).parents[2] / "scenarios"))


def text(name):
    return (SCENARIOS / f"{name}.deon").read_text()


def test_parse_theft():
    s = deon.parse(text("theft"), "theft.deon")
    assert s.name == "theft"
    assert s.agents == ["a", "b"]
    assert s.plans == ["steal"]


def test_round_trip():
    for name in ["theft", "ambulance", "merge", "bus", "pedestrian"]:
        s = deon.parse(text(name))
        assert deon.parse(s.to_text()) == s


def test_evaluate_pedestrian():
    doc = deon.parse(text("pedestrian")).evaluate()
    overall = {p["plan"]: p["overall"] for p in doc["plans"]}
    assert overall["brake"] == "ethical"
    assert overall["no_brake"] == "unethical"
    assert doc["stable"] is True


def test_check_exit_codes():
    code, doc, _ = deon.check(text("theft"))
    assert code == 1
    assert doc["plans"][0]["principle"] == "generalization"
    code, doc, err = deon.check("")
    assert code == 3 and doc is None
    assert "expected scenario header" in err


def test_parse_error_diagnostics():
    with pytest.raises(deon.ParseError) as info:
        deon.parse("scenario x\nagents a\npredicates { C/1 }\nphysics { C(zed); }\n")
    assert isinstance(info.value, ValueError)
    diag = info.value.diagnostics[0]
    assert diag["code"] == "unknown-reference"
    assert diag["line"] == 4


def test_clause_dump():
    s = deon.parse(text("theft"))
    assert s.query_ids() == ["generalization/steal"]
    assert "p cnf" in s.clauses("generalization/steal")


def test_solver():
    status, model, _ = deon.solve(2, [[1, 2], [-1]])
    assert status == "sat" and model == [False, True]
    status, _, conflict = deon.solve(1, [[1], [-1]])
    assert status == "unsat" and conflict
    assert deon.brute_force(1, [[1], [-1]])[0] == "unsat"
