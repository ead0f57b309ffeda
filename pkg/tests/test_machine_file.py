import random

import pytest
from hypothesis import given, settings

from conftest import seeds
from tmencode.encoding import ReservedNames
from tmencode.machine_file import MachineFileError, MachineSpec, load_machine, parse_machine, render_machine
from tmencode.sampling import random_machine, random_window
from tmencode.tm import parity_machine, unary

GOOD = """\
alphabet: b 1
blank: b
states: q0 q1 q2 q3
start: q0
rule: q0 b -> 1 L q2
rule: q0 1 -> b R q1
rule: q1 b -> b L q3
rule: q1 1 -> b R q0
rule: q2 b -> b R q3
rule: q2 1 -> b R q3
tape: 1 1 1
head: 0
"""


def diagnostics(text, **kw):
    with pytest.raises(MachineFileError) as err:
        parse_machine(text, **kw)
    return [(d.line, d.column, d.message) for d in err.value.diagnostics]


def test_parity_file_matches_the_machine(machines_dir):
    spec = load_machine(machines_dir / "parity3.tm")
    assert spec.machine == parity_machine()
    assert spec.config.tape == unary(3)
    assert spec.name == "parity3"
    assert parse_machine(GOOD).machine == parity_machine()


def test_missing_blank():
    (d,) = diagnostics(GOOD.replace("blank: b\n", ""))
    assert "missing required key 'blank'" in d[2]


def test_rule_with_unknown_state_points_at_its_line():
    found = diagnostics(GOOD.replace("rule: q2 1 -> b R q3", "rule: q2 1 -> b R q9"))
    assert any(line == 10 and "q9" in msg for line, _, msg in found)


@pytest.mark.parametrize("bad, line, col, fragment", [
    ("colour: red", 13, 1, "unknown key"),
    ("start: q1", 13, 1, "duplicate key"),
    ("rule: q0 b -> b X q1", 13, 17, "move must be L or R"),
    ("rule: q0 b b R q1", 13, 12, "rule must read"),
    ("just words", 13, 1, "expected 'key: value'"),
])
def test_positioned_diagnostics(bad, line, col, fragment):
    found = diagnostics(GOOD + bad + "\n")
    assert any((l, c) == (line, col) and fragment in m for l, c, m in found), found


def test_head_and_tape_checks():
    assert any("outside tape" in m for _, _, m in diagnostics(GOOD.replace("head: 0", "head: 5")))
    assert any("not in alphabet" in m for _, _, m in diagnostics(GOOD.replace("tape: 1 1 1", "tape: 1 x 1")))
    assert any("non-negative" in m for _, _, m in diagnostics(GOOD.replace("head: 0", "head: -1")))


def test_nondeterminism_flag():
    text = GOOD + "rule: q0 b -> b R q1\n"
    assert any("nondeterministic" in m for _, _, m in diagnostics(text))
    assert len(parse_machine(text, allow_nondet=True).machine.rules) == 7


def test_reserved_overrides():
    spec = parse_machine(GOOD + "reserved: e=end l=ll\n")
    assert spec.reserved == ReservedNames(e="end", l="ll")
    assert any("clash" in m for _, _, m in diagnostics(GOOD + "reserved: e=q0\n"))
    assert any("unknown reserved" in m for _, _, m in diagnostics(GOOD + "reserved: z=y\n"))


def test_comments_and_optional_tape():
    spec = parse_machine("# looper\nalphabet: b  # one symbol\nblank: b\nstates: q0\nstart: q0\n"
                         "rule: q0 b -> b R q0\n")
    assert spec.tape == () and spec.config.tape.head == "b"


def test_render_of_parity_is_the_file_body():
    assert render_machine(parse_machine(GOOD)) == GOOD


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_parse_render_round_trip(seed):
    rng = random.Random(seed)
    m = random_machine(rng)
    w = random_window(rng, m)
    cells = (*reversed(w.left), w.head, *w.right)
    reserved = ReservedNames(e="edge") if rng.random() < 0.3 else ReservedNames()
    spec = MachineSpec(m, cells, len(w.left), reserved)
    assert parse_machine(render_machine(spec)) == spec
