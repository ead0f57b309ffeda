import random

import pytest
from hypothesis import given, settings

from conftest import seeds
from tmencode.acpc import Input, Output
from tmencode.congruence import CalculusMismatch, alpha_equal, canonicalize, equiv
from tmencode.pi import PiIn, PiOut
from tmencode.process import NIL, Par, Rep, Res, nu, par, split
from tmencode.sampling import congruent_variant, random_acpc, random_pi
from tmencode.terms import Binder, Compound, NameMatch

P = Input(Compound(NameMatch("a"), Binder("x")), Output(Compound("x", "b")))
Q = Output(Compound("a", "c"))


def out(*names):
    t = names[0]
    for n in names[1:]:
        t = Compound(t, n)
    return Output(t)


def test_nil_unit():
    assert canonicalize(Par((P, NIL))).key == canonicalize(P).key


def test_replication_absorbs_a_copy():
    assert canonicalize(Par((P, Rep(P)))).key == canonicalize(Rep(P)).key


def test_restriction_order():
    body = par(out("a", "x"), out("y", "b"), out("x", "y"))
    assert canonicalize(Res(("x",), Res(("y",), body))).key == canonicalize(Res(("y",), Res(("x",), body))).key


def test_commutativity_and_distinct_names():
    assert equiv(par(P, Q), par(Q, P))
    assert not equiv(out("a"), out("b"))


def test_scope_extrusion_and_unused_restriction():
    assert equiv(par(Q, nu(["k"], out("k", "a"))), nu(["k"], par(Q, out("k", "a"))))
    assert equiv(nu(["k"], NIL), NIL)
    assert equiv(nu(["k"], Q), Q)
    # the restricted name must not capture a free one
    assert not equiv(par(out("k"), nu(["k"], out("k", "a"))), nu(["k"], par(out("k"), out("k", "a"))))


def test_alpha_equal_examples():
    assert alpha_equal(nu(["x"], out("x")), nu(["y"], out("y")))
    assert alpha_equal(Input(Binder("x"), out("x")), Input(Binder("y"), out("y")))
    assert not alpha_equal(out("a"), out("b"))
    assert not alpha_equal(par(P, Q), par(Q, P))


def test_symmetric_restricted_names():
    a = nu(["x", "y"], par(out("x", "a"), out("y", "a"), out("x", "y")))
    b = nu(["y", "x"], par(out("y", "a"), out("x", "a"), out("x", "y")))
    c = nu(["x", "y"], par(out("x", "a"), out("y", "a"), out("y", "x")))
    assert equiv(a, b) and equiv(a, c)
    assert not equiv(a, nu(["x", "y"], par(out("x", "a"), out("y", "a"), out("x", "x"))))


def test_mixed_calculi_rejected():
    with pytest.raises(CalculusMismatch):
        equiv(Q, PiOut("a", ()))
    with pytest.raises(CalculusMismatch):
        canonicalize(par(Q, PiOut("a", ())))


def test_canonical_form_digest_is_stable():
    a, b = canonicalize(par(P, Q)), canonicalize(par(Q, NIL, P))
    assert a.digest == b.digest and len(a.digest) == 16
    assert canonicalize(a) is a
    assert a.calculus == "acpc" and canonicalize(PiIn("a", ())).calculus == "pi"


def _generators(seed):
    rng = random.Random(seed)
    gen = random_acpc if rng.random() < 0.5 else random_pi
    return rng, gen(rng, depth=rng.randint(1, 4))


@settings(max_examples=300, deadline=None)
@given(seeds)
def test_canonicalize_is_idempotent(seed):
    _, p = _generators(seed)
    cf = canonicalize(p)
    assert canonicalize(cf.process).key == cf.key
    assert canonicalize(cf.process).process == cf.process


@settings(max_examples=300, deadline=None)
@given(seeds)
def test_congruent_variants_are_equivalent(seed):
    rng, p = _generators(seed)
    v1 = congruent_variant(rng, p)
    v2 = congruent_variant(rng, v1)
    assert equiv(p, p)
    assert equiv(p, v1) and equiv(v1, p)
    assert equiv(v1, v2) and equiv(p, v2)


@settings(max_examples=300, deadline=None)
@given(seeds)
def test_renaming_a_free_name_is_observed(seed):
    _, p = _generators(seed)
    live = sorted(canonicalize(p).process.fn)
    for a in live:
        assert not equiv(p, p.subst({a: "fresh_name"}))


@settings(max_examples=300, deadline=None)
@given(seeds)
def test_dropping_a_component_is_observed(seed):
    _, p = _generators(seed)
    cf = canonicalize(p)
    group, comps = split(cf.process)
    for i in range(len(comps)):
        smaller = nu(group, par(*comps[:i], *comps[i + 1:]))
        assert not equiv(cf, smaller)
