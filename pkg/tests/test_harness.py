import json
from dataclasses import replace

import pytest

from tmencode import harness
from tmencode.encoding import encode_config, encode_transition_fn
from tmencode.harness import CALCULI, Engine, check_all, check_faithful, emit_trace
from tmencode.machine_file import MachineSpec, parse_machine
from tmencode.process import par
from tmencode.tm import LEFT, RIGHT, Machine, Rule


@pytest.mark.parametrize("calculus, per_step", [("acpc", 1), ("cpc", 1), ("psi", 1), ("pi", 2)])
def test_parity_lockstep(parity3, calculus, per_step):
    rep = check_faithful(parity3, calculus, 100)
    assert rep.passed and rep.halted and not rep.diverged
    assert rep.steps_performed == 4
    assert rep.reductions == 4 * per_step
    assert all(r.candidates == (1,) * per_step for r in rep.records[1:])
    assert all(r.equiv for r in rep.records)
    assert rep.final_candidates == 0


def test_checks_recorded(parity2):
    assert all(r.checks == {"no_output_pairs": True} for r in check_faithful(parity2, "cpc", 10).records[1:])
    assert all(r.checks == {"isomorphic": True} for r in check_faithful(parity2, "psi", 10).records[1:])
    assert all(r.checks == {"phase": True} for r in check_faithful(parity2, "pi", 10).records[1:])


def test_looper_diverges(looper):
    rep = check_faithful(looper, "acpc", 50)
    assert rep.passed and rep.diverged and not rep.halted
    assert rep.steps_performed == 50


def test_zero_steps(parity3):
    rep = check_faithful(parity3, "acpc", 0)
    assert rep.passed and rep.steps_performed == 0 and not rep.halted and rep.diverged
    with pytest.raises(ValueError):
        check_faithful(parity3, "acpc", -1)


def test_pi_without_padding_is_stuck(looper):
    rep = check_faithful(looper, "pi", 5, budget=0)
    assert rep.verdict == "STUCK"
    assert rep.records[-1].candidates == (1, 0)
    assert rep.records[-1].reductions == 1
    assert "reduction 2" in rep.message


def test_pi_budget_pairs(looper):
    assert check_faithful(looper, "pi", 6, budget=(0, 6)).passed
    assert check_faithful(looper, "pi", 6, budget=(6, 0)).verdict == "STUCK"


def test_a_wrong_encoding_is_caught(parity3, monkeypatch):
    """Swap every move direction in the encoded transition function only."""
    def flipped(spec, cfg, pad):
        m = spec.machine
        rules = tuple(replace(u, move=LEFT if u.move == RIGHT else RIGHT) for u in m.rules)
        return par(encode_config(cfg, spec.reserved), encode_transition_fn(replace(m, rules=rules), spec.reserved))
    bad = Engine("acpc", 1, flipped, harness.ENGINES["acpc"].redexes)
    monkeypatch.setitem(harness.ENGINES, "acpc", bad)
    rep = check_faithful(parity3, "acpc", 10)
    assert rep.verdict == "FAIL"
    assert rep.records[-1].equiv is False
    assert "decodes to" in rep.message


def test_nondeterministic_machine_explores_both_branches():
    m = Machine(("b",), "b", ("q", "h"), "q", (Rule("q", "b", "b", RIGHT, "h"), Rule("q", "b", "b", LEFT, "h")))
    spec = MachineSpec(m)
    for c in ("acpc", "psi", "pi"):
        rep = check_faithful(spec, c, 3)
        assert rep.passed
        assert rep.records[1].candidates[0] == 2
        assert rep.records[1].equiv is True


def test_cpc_edge_inputs_unify_under_nondeterminism():
    """Two rules from one (state, symbol) give two input-shaped cases that
    unify with each other, which the checker reports."""
    m = Machine(("b",), "b", ("q", "h"), "q", (Rule("q", "b", "b", RIGHT, "h"), Rule("q", "b", "b", LEFT, "h")))
    rep = check_faithful(MachineSpec(m), "cpc", 3)
    assert rep.verdict == "FAIL"
    assert rep.records[1].candidates == (3,)


def test_reports_are_deterministic(parity3):
    a = json.dumps([r.to_json() for r in check_all(parity3, 10).values()])
    b = json.dumps([r.to_json() for r in check_all(parity3, 10).values()])
    assert a == b


def test_json_schema(parity3):
    data = check_faithful(parity3, "acpc", 10).to_json()
    assert {"machine", "steps", "verdict", "diverged"} <= set(data)
    for rec in data["steps"]:
        assert {"index", "state", "left", "head", "right", "reductions", "equiv"} <= set(rec)
    assert data["steps"][1]["left"] == ["b"] and data["steps"][1]["right"] == ["1"]


def test_emit_trace_modes(parity3):
    tm = json.loads(emit_trace(parity3, "tm", "json"))
    assert len(tm["steps"]) == 5 and tm["halted"]
    text = emit_trace(parity3, "encoded", "text")
    assert text.splitlines()[0].startswith("0: out(q0•((e•1)•(1•(1•e))))")
    lock = json.loads(emit_trace(parity3, "lockstep", "json", calculus="pi"))
    assert [s["equiv"] for s in lock["steps"]] == [True] * 5
    with pytest.raises(ValueError):
        emit_trace(parity3, "nope")


def test_reserved_overrides_flow_through():
    spec = parse_machine("alphabet: b 1\nblank: b\nstates: q0 q1\nstart: q0\nrule: q0 1 -> b R q0\n"
                         "rule: q0 b -> b L q1\ntape: 1 1\nhead: 0\nreserved: e=end l=L1 r=R1\n")
    for c in CALCULI:
        assert check_faithful(spec, c, 10).passed, c
