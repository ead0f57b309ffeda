"""A Psi-calculi instance: terms are names and pairs, assertions are trivial,
and channel equivalence is syntactic equality."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from . import acpc
from .encoding import DEFAULT_RESERVED, ReservedNames, encode_tape, tuple_branches
from .process import NIL, Calculus, Nil, Par, Process, Rep, Res, enter_scope, normalize, par, redexes
from .terms import Binder, Compound, NameMatch, leaves, rebuild


class Pair(NamedTuple):
    left: object
    right: object


def to_pairs(t):
    """Read a compound term or pattern as a pair term; binders and name-matches
    become plain names."""
    done: list = []
    stack: list = [(t, False)]
    while stack:
        x, expanded = stack.pop()
        if not isinstance(x, tuple):
            done.append(x.name if isinstance(x, (Binder, NameMatch)) else x)
        elif expanded:
            r = done.pop()
            l = done.pop()
            done.append(Pair(l, r))
        else:
            stack.append((x, True))
            stack.append((x[1], False))
            stack.append((x[0], False))
    return done[0]


def terms_equal(a, b) -> bool:
    """Structural equality that never recurses (terms can be deep)."""
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        if isinstance(x, tuple):
            if not isinstance(y, tuple):
                return False
            stack.append((x[1], y[1]))
            stack.append((x[0], y[0]))
        elif isinstance(y, tuple) or x != y:
            return False
    return True


def channel_equiv(m, n) -> bool:
    return terms_equal(m, n)


def psi_match(k, binders, h):
    """The substitution ``L`` with ``k == h[binders := L]``, or None."""
    bset = set(binders)
    out: dict = {}
    stack = [(k, h)]
    while stack:
        x, y = stack.pop()
        if isinstance(y, str) and y in bset:
            if y in out:
                if not terms_equal(out[y], x):
                    return None
            else:
                out[y] = x
        elif isinstance(y, tuple):
            if not isinstance(x, tuple):
                return None
            stack.append((x[1], y[1]))
            stack.append((x[0], y[0]))
        elif isinstance(x, tuple) or x != y:
            return None
    if len(out) != len(bset):
        return None
    return out


def _term_names(t) -> set:
    return set(leaves(t))


def _subst_term(sigma: dict, t):
    return rebuild(t, lambda n: sigma.get(n, n))


def _show(t) -> str:
    parts: list = []
    stack: list = [t]
    while stack:
        x = stack.pop()
        if isinstance(x, tuple):
            stack.extend([")", x[1], ", ", x[0], "("])
        else:
            parts.append(x)
    return "".join(parts)


def _body(p: Process) -> str:
    s = p.pretty()
    return s if isinstance(p, (Nil, PsiIn, PsiOut)) else f"({s})"


@dataclass(frozen=True)
class PsiOut(Process):
    channel: object
    payload: object
    body: Process = NIL
    calculus = "psi"

    def _free_names(self):
        return _term_names(self.channel) | _term_names(self.payload) | self.body.fn

    def _subst(self, sigma):
        return PsiOut(_subst_term(sigma, self.channel), _subst_term(sigma, self.payload),
                      self.body.subst(sigma))

    def normalized(self, variables):
        if isinstance(self.body, Nil):
            return self
        return PsiOut(self.channel, self.payload, normalize(self.body, variables))

    def key(self, kx):
        return ("out", kx.term(self.channel), kx.term(self.payload), kx.process(self.body))

    def pretty(self):
        return f"{_show(self.channel)}̄⟨{_show(self.payload)}⟩.{_body(self.body)}"


@dataclass(frozen=True)
class PsiIn(Process):
    channel: object
    binders: tuple[str, ...]
    pattern: object
    body: Process = NIL
    calculus = "psi"

    def __post_init__(self):
        if len(set(self.binders)) != len(self.binders):
            raise ValueError(f"repeated binder in {self.binders}")
        missing = set(self.binders) - _term_names(self.pattern)
        if missing:
            raise ValueError(f"binders {sorted(missing)} do not occur in the pattern")

    def _free_names(self):
        inside = (_term_names(self.pattern) | self.body.fn) - set(self.binders)
        return _term_names(self.channel) | inside

    def _subst(self, sigma):
        scope_fn = _term_names(self.pattern) | self.body.fn
        inner, renaming = enter_scope(sigma, self.binders, scope_fn)
        both = {**renaming, **inner}
        return PsiIn(_subst_term(sigma, self.channel),
                     tuple(renaming.get(b, b) for b in self.binders),
                     _subst_term(both, self.pattern), self.body.subst(both))

    def normalized(self, variables):
        if isinstance(self.body, Nil):
            return self
        return PsiIn(self.channel, self.binders, self.pattern,
                     normalize(self.body, variables | set(self.binders)))

    def _order(self) -> list[str]:
        bset, seen = set(self.binders), []
        for x in leaves(self.pattern):
            if x in bset and x not in seen:
                seen.append(x)
        return seen

    def key(self, kx):
        inner = kx.scope(self._order())
        return ("in", kx.term(self.channel), len(self.binders), inner.term(self.pattern),
                inner.process(self.body))

    def pretty(self):
        xs = ",".join(self.binders)
        return f"{_show(self.channel)}(λ{xs}){_show(self.pattern)}.{_body(self.body)}"


@dataclass(frozen=True)
class Assertion(Process):
    """The unit assertion; it neither communicates nor entails anything."""

    calculus = "psi"

    def _free_names(self):
        return set()

    def _subst(self, sigma):
        return self

    def key(self, kx):
        return ("assert",)

    def pretty(self):
        return "(|1|)"


def _interact(a, b):
    if not channel_equiv(a.channel, b.channel):
        return None
    sub = psi_match(a.payload, b.binders, b.pattern)
    if sub is None:
        return None
    return [a.body, b.body.subst(sub)]


def _role(c):
    if isinstance(c, PsiOut):
        return "send"
    if isinstance(c, PsiIn):
        return "recv"
    return None


def _channel(c):
    return c.channel if isinstance(c.channel, str) else None


PSI = Calculus("psi", _interact, _role, _channel)


def redex_list(p: Process):
    return redexes(p, PSI)


def reduce_candidates(p: Process) -> list[Process]:
    return acpc.dedup([r.successor for r in redexes(p, PSI)])


def encode_config_psi(cfg, reserved: ReservedNames = DEFAULT_RESERVED) -> PsiOut:
    return PsiOut(cfg.state, to_pairs(encode_tape(cfg.tape, reserved)))


def encode_tuple_psi(u, blank: str, reserved: ReservedNames = DEFAULT_RESERVED) -> Process:
    comps = []
    for pattern, result in tuple_branches(u, blank, reserved):
        comps.append(Rep(_input_from_pattern(pattern, _output_from(result))))
    return par(*comps)


def _output_from(term) -> PsiOut:
    return PsiOut(term.left, to_pairs(term.right))


def _input_from_pattern(pattern, body: Process) -> PsiIn:
    channel = pattern.left
    if not isinstance(channel, NameMatch):
        raise ValueError("an encoded input pattern starts with its state name")
    binders = tuple(x.name for x in leaves(pattern.right) if isinstance(x, Binder))
    return PsiIn(channel.name, binders, to_pairs(pattern.right), body)


def encode_transition_fn_psi(machine, reserved: ReservedNames = DEFAULT_RESERVED) -> Process:
    reserved.check(machine)
    return par(*(encode_tuple_psi(u, machine.blank, reserved) for u in machine.rules))


def encode_machine_psi(machine, cfg, reserved: ReservedNames = DEFAULT_RESERVED) -> Process:
    reserved.check(machine)
    return par(encode_config_psi(cfg, reserved), encode_transition_fn_psi(machine, reserved))


def from_acpc(p: Process) -> Process:
    """Transliterate an encoding-shaped ACPC process: ``q • t`` becomes channel
    ``q`` carrying ``t`` with every ``•`` read as a pair."""
    if isinstance(p, acpc.Output):
        if not isinstance(p.term, Compound):
            raise ValueError("an encoded output carries state•tape")
        return PsiOut(p.term.left, to_pairs(p.term.right), from_acpc(p.body))
    if isinstance(p, acpc.Input):
        return _input_from_pattern(p.pattern, from_acpc(p.body))
    if isinstance(p, Par):
        return Par(tuple(from_acpc(x) for x in p.parts))
    if isinstance(p, Rep):
        return Rep(from_acpc(p.body))
    if isinstance(p, Res):
        return Res(p.names, from_acpc(p.body))
    if isinstance(p, Nil):
        return p
    raise TypeError(f"not an ACPC process: {p!r}")

