import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import seeds
from tmencode import acpc
from tmencode.congruence import canonicalize, equiv
from tmencode.encoding import encode_machine
from tmencode.process import normalize, par, split
from tmencode.psi import (
    Assertion, Pair, PsiIn, PsiOut, channel_equiv, encode_config_psi, encode_machine_psi,
    encode_transition_fn_psi, from_acpc, psi_match, redex_list, reduce_candidates,
)
from tmencode.sampling import random_config, random_machine
from tmencode.terms import rebuild
from tmencode.tm import Configuration, parity_machine, run, successors, unary

PARITY = parity_machine()

names = st.sampled_from(["a", "b", "c", "e", "1"])
terms = st.recursive(names, lambda t: st.builds(Pair, t, t), max_leaves=10)


def test_channel_equivalence_is_syntactic():
    assert channel_equiv("q0", "q0")
    assert not channel_equiv("q0", "q1")
    assert channel_equiv(Pair("a", "b"), Pair("a", "b"))


def test_psi_match_examples():
    k = Pair(Pair("e", "1"), Pair("1", Pair("1", "e")))
    h = Pair(Pair("l", "1"), Pair("r1", "r"))
    assert psi_match(k, ("l", "r1", "r"), h) == {"l": "e", "r1": "1", "r": Pair("1", "e")}
    assert psi_match("a", (), "a") == {}
    assert psi_match("a", ("x", "y"), Pair("x", "y")) is None


def test_psi_match_requires_consistent_repeats():
    assert psi_match(Pair("a", "a"), ("x",), Pair("x", "x")) == {"x": "a"}
    assert psi_match(Pair("a", "b"), ("x",), Pair("x", "x")) is None


def test_input_binders_must_occur_in_pattern():
    with pytest.raises(ValueError):
        PsiIn("a", ("x",), "y")
    with pytest.raises(ValueError):
        PsiIn("a", ("x", "x"), Pair("x", "x"))


def test_reduction_axiom():
    p = par(PsiOut("q0", Pair("a", "b")), PsiIn("q0", ("x",), Pair("x", "b"), PsiOut("x", "x")))
    (succ,) = reduce_candidates(p)
    assert equiv(succ, PsiOut("a", "a"))
    assert reduce_candidates(par(PsiOut("q0", "a"), PsiIn("q1", ("x",), "x"))) == []


def test_assertion_is_inert():
    assert redex_list(par(Assertion(), PsiOut("a", "b"))) == []
    assert Assertion().pretty() == "(|1|)"


def test_encoding_payload_and_pretty():
    out = encode_config_psi(Configuration("q0", unary(3)))
    assert out.payload == Pair(Pair("e", "1"), Pair("1", Pair("1", "e")))
    assert out.pretty() == "q0̄⟨((e, 1), (1, (1, e)))⟩.0"


def test_encoding_shape():
    _, comps = split(normalize(encode_machine_psi(PARITY, Configuration("q0", unary(3)))))
    assert sum(isinstance(c, PsiOut) for c in comps) == 1
    assert len(comps) == 13


def test_parity_lockstep_and_isomorphism():
    p = encode_machine_psi(PARITY, Configuration("q0", unary(3)))
    shadow = encode_machine(PARITY, Configuration("q0", unary(3)))
    for cfg in run(PARITY, Configuration("q0", unary(3)), 100).configs[1:]:
        (p,) = reduce_candidates(p)
        (shadow,) = acpc.reduce_candidates(shadow)
        assert equiv(p, encode_machine_psi(PARITY, cfg))
        assert canonicalize(from_acpc(shadow)).key == canonicalize(p).key
    assert reduce_candidates(p) == []


def test_parts_do_not_reduce_alone():
    assert redex_list(encode_config_psi(Configuration("q0", unary(3)))) == []
    assert redex_list(encode_transition_fn_psi(PARITY)) == []


@given(terms, st.lists(st.sampled_from(["x", "y", "z"]), unique=True, min_size=1), st.data())
def test_psi_match_round_trip(h_base, binders, data):
    """Substituting L into H and matching back recovers L."""
    h = h_base
    for b in binders:
        h = Pair(h, b)
    values = {b: data.draw(terms) for b in binders}
    k = rebuild(h, lambda n: values.get(n, n))
    assert psi_match(k, tuple(binders), h) == values


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_random_single_steps_match_acpc(seed):
    rng = random.Random(seed)
    m = random_machine(rng)
    cfg = random_config(rng, m)
    succ = reduce_candidates(encode_machine_psi(m, cfg))
    nexts = successors(m, cfg)
    assert len(succ) == len(nexts)
    for s, n in zip(succ, nexts):
        assert equiv(s, encode_machine_psi(m, n))
