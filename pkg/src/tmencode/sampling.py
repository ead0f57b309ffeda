"""Random machines, tape windows and processes for property checks.

Every generator takes a ``random.Random`` so runs are reproducible from a seed.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import fields, is_dataclass

from . import pi
from .acpc import Input, Output
from .process import NIL, Nil, Par, Process, Rep, Res, normalize, split
from .terms import Binder, Compound, NameMatch, binding_names, rename_binders
from .tm import LEFT, RIGHT, Configuration, Machine, Rule, Tape

FREE = ("a", "b", "c")


def random_machine(rng: random.Random, max_symbols: int = 4, max_states: int = 5,
                   p_terminating: float = 0.25) -> Machine:
    """A valid deterministic machine; each state is terminating with probability
    ``p_terminating`` and total otherwise."""
    symbols = tuple(f"s{i}" for i in range(rng.randint(1, max_symbols)))
    states = tuple(f"q{i}" for i in range(rng.randint(1, max_states)))
    rules = []
    for q in states:
        if rng.random() < p_terminating:
            continue
        for s in symbols:
            rules.append(Rule(q, s, rng.choice(symbols), rng.choice((LEFT, RIGHT)), rng.choice(states)))
    return Machine(symbols, symbols[0], states, states[0], tuple(rules))


def random_window(rng: random.Random, machine: Machine, max_len: int = 6) -> Tape:
    n = rng.randint(1, max_len)
    cells = [rng.choice(machine.alphabet) for _ in range(n)]
    return Tape.from_cells(cells, rng.randrange(n), machine.blank)


def random_config(rng: random.Random, machine: Machine, max_len: int = 6) -> Configuration:
    return Configuration(rng.choice(machine.states), random_window(rng, machine, max_len))


class _Fresh:
    def __init__(self, prefix: str, avoid=()):
        self.counter = itertools.count(1)
        self.prefix = prefix
        self.avoid = set(avoid)

    def __call__(self) -> str:
        while True:
            name = f"{self.prefix}{next(self.counter)}"
            if name not in self.avoid:
                return name


def all_names(x) -> set:
    """Every name occurring anywhere in a process, term or pattern, bound or free."""
    out, stack = set(), [x]
    while stack:
        y = stack.pop()
        if isinstance(y, str):
            out.add(y)
        elif isinstance(y, tuple):
            stack.extend(y)
        elif is_dataclass(y):
            stack.extend(getattr(y, f.name) for f in fields(y))
    return out


def _term(rng, names, depth):
    if depth <= 0 or rng.random() < 0.5:
        return rng.choice(names)
    return Compound(_term(rng, names, depth - 1), _term(rng, names, depth - 1))


def _pattern(rng, names, fresh, depth):
    if depth <= 0 or rng.random() < 0.5:
        return Binder(fresh()) if rng.random() < 0.4 else NameMatch(rng.choice(names))
    return Compound(_pattern(rng, names, fresh, depth - 1), _pattern(rng, names, fresh, depth - 1))


def random_acpc(rng: random.Random, depth: int = 3, fresh=None, names=FREE) -> Process:
    fresh = fresh or _Fresh("x")
    names = list(names)
    kind = rng.choices(("nil", "out", "in", "par", "res", "rep"), (1, 3, 3, 3, 2, 1))[0]
    if depth <= 0 or kind == "nil":
        return Output(_term(rng, names, 1)) if depth <= 0 and rng.random() < 0.7 else NIL
    if kind == "out":
        return Output(_term(rng, names, 2), random_acpc(rng, depth - 1, fresh, names))
    if kind == "in":
        p = _pattern(rng, names, fresh, 2)
        return Input(p, random_acpc(rng, depth - 1, fresh, names + binding_names(p)))
    if kind == "par":
        return Par(tuple(random_acpc(rng, depth - 1, fresh, names) for _ in range(rng.randint(2, 3))))
    if kind == "res":
        x = fresh()
        return Res((x,), random_acpc(rng, depth - 1, fresh, names + [x]))
    return Rep(random_acpc(rng, depth - 1, fresh, names))


def random_pi(rng: random.Random, depth: int = 3, fresh=None, names=FREE, variables=()) -> Process:
    fresh = fresh or _Fresh("x")
    names = list(names)
    kind = rng.choices(("nil", "out", "in", "par", "res", "rep", "if"), (1, 3, 3, 3, 2, 1, 2))[0]
    if depth <= 0 or kind == "nil":
        return pi.PiOut(rng.choice(names), (rng.choice(names),)) if depth <= 0 and rng.random() < 0.7 else NIL
    if kind == "out":
        payload = tuple(rng.choice(names) for _ in range(rng.randint(0, 2)))
        return pi.PiOut(rng.choice(names), payload, random_pi(rng, depth - 1, fresh, names, variables))
    if kind == "in":
        xs = tuple(fresh() for _ in range(rng.randint(0, 2)))
        body = random_pi(rng, depth - 1, fresh, names + list(xs), (*variables, *xs))
        return pi.PiIn(rng.choice(names), xs, body)
    if kind == "par":
        return Par(tuple(random_pi(rng, depth - 1, fresh, names, variables) for _ in range(rng.randint(2, 3))))
    if kind == "res":
        x = fresh()
        return Res((x,), random_pi(rng, depth - 1, fresh, names + [x], variables))
    if kind == "rep":
        return Rep(random_pi(rng, depth - 1, fresh, names, variables))
    # conditionals only on input-bound names, so they stay unresolved
    m = rng.choice(variables) if variables else rng.choice(names)
    return pi.Ifte(m, rng.choice(names), random_pi(rng, depth - 1, fresh, names, variables),
                   random_pi(rng, depth - 1, fresh, names, variables))


def congruent_variant(rng: random.Random, p: Process, fresh=None) -> Process:
    """A process structurally congruent to ``p``, rewritten by randomly chosen
    laws: α-conversion, parallel reordering and regrouping, ``0`` units,
    restriction reordering, scope extrusion, ``P | !P`` for ``!P``, and (π)
    conditional resolution on distinct or equal free names."""
    fresh = fresh or _Fresh("v", all_names(p))
    return _vary(rng, p, fresh, top=True)


def _vary(rng, p, fresh, top=False, bound=frozenset()):
    if isinstance(p, Nil):
        return Par((NIL, NIL)) if rng.random() < 0.2 else NIL
    if isinstance(p, Output):
        return _wrap(rng, Output(p.term, _vary(rng, p.body, fresh, bound=bound)), fresh, top)
    if isinstance(p, Input):
        mapping = {b: fresh() for b in binding_names(p.pattern)} if rng.random() < 0.6 else {}
        body = p.body.subst(mapping) if mapping else p.body
        pattern = rename_binders(p.pattern, mapping)
        inner = _vary(rng, body, fresh, bound=bound | set(binding_names(pattern)))
        return _wrap(rng, Input(pattern, inner), fresh, top)
    if isinstance(p, pi.PiOut):
        return _wrap(rng, pi.PiOut(p.channel, p.payload, _vary(rng, p.body, fresh, bound=bound)), fresh, top)
    if isinstance(p, pi.PiIn):
        mapping = {b: fresh() for b in p.binders} if rng.random() < 0.6 else {}
        body = p.body.subst(mapping) if mapping else p.body
        binders = tuple(mapping.get(b, b) for b in p.binders)
        q = pi.PiIn(p.channel, binders, _vary(rng, body, fresh, bound=bound | set(binders)))
        return _wrap(rng, q, fresh, top)
    if isinstance(p, pi.Ifte):
        q = pi.Ifte(p.m, p.n, _vary(rng, p.then, fresh, bound=bound), _vary(rng, p.orelse, fresh, bound=bound))
        return _wrap(rng, q, fresh, top)
    if isinstance(p, Res):
        mapping = {n: fresh() for n in p.names}
        names = [mapping[n] for n in p.names]
        rng.shuffle(names)
        body = _vary(rng, p.body.subst(mapping), fresh, bound=bound)
        if len(names) > 1 and rng.random() < 0.5:
            return Res(tuple(names[:1]), Res(tuple(names[1:]), body))
        return Res(tuple(names), body)
    if isinstance(p, Rep):
        q = Rep(_vary(rng, p.body, fresh, bound=bound))
        # copies only of single, replication-free, ν-free bodies, where
        # absorption is complete
        group, comps = split(normalize(p.body, frozenset(bound)))
        if not group and len(comps) == 1 and not _has_rep(comps[0]) and rng.random() < 0.4:
            return Par((q, _vary(rng, p.body, fresh, bound=bound)))
        return q
    if isinstance(p, Par):
        parts = [_vary(rng, x, fresh, bound=bound) for x in p.parts]
        rng.shuffle(parts)
        if rng.random() < 0.3:
            parts.append(NIL)
        if len(parts) > 2 and rng.random() < 0.5:
            k = rng.randint(1, len(parts) - 1)
            parts = [Par(tuple(parts[:k])), *parts[k:]]
        out = Par(tuple(parts))
        res = [i for i, x in enumerate(out.parts) if isinstance(x, Res)]
        if res and rng.random() < 0.5:
            i = res[0]
            r = out.parts[i]
            rest = out.parts[:i] + out.parts[i + 1:]
            return Res(r.names, Par((r.body, *rest)))
        return out
    return p


def _has_rep(p: Process) -> bool:
    return isinstance(p, Rep) or any(_has_rep(c) for c in p.children())


def _wrap(rng, p, fresh, top):
    """Optionally hide ``p`` under a conditional that resolves to it."""
    if not top or not isinstance(p, (pi.PiOut, pi.PiIn, pi.Ifte)) or rng.random() < 0.7:
        return p
    junk = pi.PiOut(FREE[0], ())
    if rng.random() < 0.5:
        return pi.Ifte(FREE[1], FREE[1], p, junk)
    return pi.Ifte(FREE[1], FREE[2], junk, p)


def rename_free(p: Process, old: str, new: str) -> Process:
    return p.subst({old: new})
