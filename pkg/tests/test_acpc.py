import random

import pytest
from hypothesis import given, settings

from conftest import seeds
from tmencode.acpc import Input, Output, reduce_candidates, run_reductions
from tmencode.congruence import equiv, structural_key
from tmencode.encoding import encode_machine
from tmencode.process import NIL, Rep, Res, nu, par
from tmencode.sampling import congruent_variant, random_acpc
from tmencode.terms import Binder, Compound, NameMatch, parse_pattern, parse_term
from tmencode.tm import Configuration, parity_machine, unary


def out(text, body=NIL):
    return Output(parse_term(text), body)


def inp(text, body=NIL):
    return Input(parse_pattern(text), body)


def test_binders_receive_components():
    q = out("x•y")
    (succ,) = reduce_candidates(par(out("a•b"), inp("λx•λy", q)))
    assert equiv(succ, out("a•b"))


def test_name_match_consumes_exactly():
    (succ,) = reduce_candidates(par(out("a•b"), inp("a•b", out("s"))))
    assert equiv(succ, out("s"))


def test_mismatch_has_no_successor():
    assert reduce_candidates(par(out("a"), inp("b", out("q")))) == []
    assert reduce_candidates(par(out("a•b"), inp("λz"))) != []


def test_whole_term_binder():
    (succ,) = reduce_candidates(par(out("a•b"), inp("λz", out("z•z"))))
    assert equiv(succ, out("(a•b)•(a•b)"))


def test_ill_formed_input_is_rejected():
    with pytest.raises(ValueError):
        Input(Compound(Binder("x"), Binder("x")))


def test_substitution_examples():
    assert out("x").subst({"x": "a"}) == out("a")
    shadowed = inp("λx", out("x"))
    assert shadowed.subst({"x": "a"}) == shadowed
    renamed = Res(("y",), out("x•y")).subst({"x": "y"})
    assert isinstance(renamed, Res) and renamed.names[0] != "y"
    assert renamed.body == Output(Compound("y", renamed.names[0]))


def test_input_name_match_is_substituted():
    p = Input(Compound(NameMatch("x"), Binder("z")), out("z"))
    assert p.subst({"x": "a"}).pattern == Compound(NameMatch("a"), Binder("z"))


def test_reduction_of_encoded_parity():
    p = encode_machine(parity_machine(), Configuration("q0", unary(3)))
    tr = run_reductions(p, 10)
    assert (tr.reductions, tr.stop) == (4, "normal")
    assert reduce_candidates(tr.states[-1]) == []


def test_nil_and_loop():
    assert run_reductions(NIL, 5).reductions == 0
    loop = par(out("a"), Rep(inp("a", out("a"))))
    tr = run_reductions(loop, 7)
    assert (tr.reductions, tr.stop) == (7, "max")
    assert all(equiv(s, loop) for s in tr.states)


def test_communication_under_restriction():
    p = nu(["k"], par(out("k•a"), inp("k•λx", out("x"))))
    (succ,) = reduce_candidates(p)
    assert equiv(succ, out("a"))


def test_replication_unfolds_once_per_reduction():
    p = par(out("a"), out("a"), Rep(inp("a", out("b"))))
    (succ,) = reduce_candidates(p)
    assert equiv(succ, par(out("a"), out("b"), Rep(inp("a", out("b")))))


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_reduction_respects_congruence(seed):
    """Congruent processes have congruent successor sets."""
    rng = random.Random(seed)
    p = random_acpc(rng)
    q = congruent_variant(rng, p)
    a = {structural_key(s) for s in reduce_candidates(p)}
    b = {structural_key(s) for s in reduce_candidates(q)}
    assert a == b


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_identity_substitution(seed):
    p = random_acpc(random.Random(seed))
    assert p.subst({}) is p
    assert equiv(p.subst({"zz": "a"}), p)
