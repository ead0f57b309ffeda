"""Polyadic π-calculus with a name-equality conditional, and the linked-list
tape encoding where one machine step takes two reductions."""

from __future__ import annotations

from dataclasses import dataclass

from . import acpc
from .encoding import DEFAULT_RESERVED, ReservedNames
from .process import NIL, Calculus, Nil, Process, Rep, build, enter_scope, nu, normalize, par, redexes
from .tm import LEFT, Configuration, Machine, Rule, Tape

SEPARATOR = "#"


def composite(state: str, symbol: str) -> str:
    """The single channel name standing for the pair (state, symbol)."""
    return f"{state}{SEPARATOR}{symbol}"


def _body(p: Process) -> str:
    s = p.pretty()
    return s if isinstance(p, (Nil, PiIn, PiOut)) else f"({s})"


@dataclass(frozen=True)
class PiOut(Process):
    channel: str
    payload: tuple[str, ...]
    body: Process = NIL
    calculus = "pi"

    def _free_names(self):
        return {self.channel, *self.payload} | self.body.fn

    def _subst(self, sigma):
        return PiOut(sigma.get(self.channel, self.channel),
                     tuple(sigma.get(x, x) for x in self.payload), self.body.subst(sigma))

    def normalized(self, variables):
        if isinstance(self.body, Nil):
            return self
        return PiOut(self.channel, self.payload, normalize(self.body, variables))

    def key(self, kx):
        return ("out", kx.name(self.channel), tuple(kx.name(x) for x in self.payload),
                kx.process(self.body))

    def pretty(self):
        return f"{self.channel}̄⟨{','.join(self.payload)}⟩.{_body(self.body)}"


@dataclass(frozen=True)
class PiIn(Process):
    channel: str
    binders: tuple[str, ...]
    body: Process = NIL
    calculus = "pi"

    def __post_init__(self):
        if len(set(self.binders)) != len(self.binders):
            raise ValueError(f"repeated binder in {self.binders}")

    def _free_names(self):
        return {self.channel} | (self.body.fn - set(self.binders))

    def _subst(self, sigma):
        inner, renaming = enter_scope(sigma, self.binders, self.body.fn)
        return PiIn(sigma.get(self.channel, self.channel),
                    tuple(renaming.get(b, b) for b in self.binders),
                    self.body.subst({**renaming, **inner}))

    def normalized(self, variables):
        if isinstance(self.body, Nil):
            return self
        return PiIn(self.channel, self.binders, normalize(self.body, variables | set(self.binders)))

    def key(self, kx):
        return ("in", kx.name(self.channel), len(self.binders),
                kx.scope(self.binders).process(self.body))

    def pretty(self):
        return f"{self.channel}({','.join(self.binders)}).{_body(self.body)}"


@dataclass(frozen=True)
class Ifte(Process):
    """``if m=n then P else Q``; resolved structurally once both names are known."""

    m: str
    n: str
    then: Process
    orelse: Process
    calculus = "pi"

    def _free_names(self):
        return {self.m, self.n} | self.then.fn | self.orelse.fn

    def _subst(self, sigma):
        return Ifte(sigma.get(self.m, self.m), sigma.get(self.n, self.n),
                    self.then.subst(sigma), self.orelse.subst(sigma))

    def resolve(self, variables):
        if self.m == self.n:
            return self.then
        if self.m in variables or self.n in variables:
            return None
        return self.orelse

    def normalized(self, variables):
        return Ifte(self.m, self.n, normalize(self.then, variables), normalize(self.orelse, variables))

    def key(self, kx):
        return ("if", kx.name(self.m), kx.name(self.n), kx.process(self.then), kx.process(self.orelse))

    def pretty(self):
        return f"if {self.m}={self.n} then {_body(self.then)} else {_body(self.orelse)}"


def _interact(a, b):
    if a.channel != b.channel or len(a.payload) != len(b.binders):
        return None
    return [a.body, b.body.subst(dict(zip(b.binders, a.payload)))]


def _role(c):
    if isinstance(c, PiOut):
        return "send"
    if isinstance(c, PiIn):
        return "recv"
    return None


PI = Calculus("pi", _interact, _role, lambda c: c.channel)


def redex_list(p: Process):
    return redexes(p, PI)


def reduce_candidates(p: Process) -> list[Process]:
    return acpc.dedup([r.successor for r in redexes(p, PI)])


class _Names:
    """Deterministic fresh names, local to one encoding call."""

    def __init__(self, avoid):
        self.avoid = set(avoid)
        self.counter = 0

    def take(self, base: str) -> str:
        while True:
            self.counter += 1
            name = f"{base}{self.counter}"
            if name not in self.avoid:
                self.avoid.add(name)
                return name


def _machine_names(machine: Machine, reserved: ReservedNames) -> set:
    return set(machine.alphabet) | set(machine.states) | set(reserved.names())


def validate_names(machine: Machine) -> None:
    for name in (*machine.alphabet, *machine.states):
        if SEPARATOR in name:
            raise ValueError(f"name {name} contains the reserved separator {SEPARATOR!r}")


def _split_budget(budget) -> tuple[int, int]:
    left, right = (budget, budget) if isinstance(budget, int) else budget
    if left < 0 or right < 0:
        raise ValueError("budget must be non-negative")
    return left, right


def _chain(start: str, cells, names: _Names, base: str):
    links, comps, cur = [], [], start
    for s in cells:
        nxt = names.take(base)
        links.append(nxt)
        comps.append(PiOut(cur, (s, nxt)))
        cur = nxt
    return links, comps


def encode_tape_pi(tape: Tape, budget, blank: str, reserved: ReservedNames = DEFAULT_RESERVED,
                   avoid=()) -> tuple[Process, str, str]:
    """Both cell chains (ν-extruded) plus the endpoints ``l`` and ``r``.

    ``budget`` is the number of explicit blank cells appended beyond each
    side of the window: an int, or a ``(left, right)`` pair.
    """
    pl, pr = _split_budget(budget)
    names = _Names({*avoid, reserved.l, reserved.r, *tape.left, tape.head, *tape.right, blank})
    llinks, lcomps = _chain(reserved.l, (*tape.left, *[blank] * pl), names, "x")
    rlinks, rcomps = _chain(reserved.r, (*tape.right, *[blank] * pr), names, "y")
    return nu(llinks + rlinks, par(*lcomps, *rcomps)), reserved.l, reserved.r


def _ifte_chain(var: str, alphabet, emit) -> Process:
    acc: Process = NIL
    for s in reversed(alphabet):
        acc = Ifte(var, s, emit(s), acc)
    return acc


def encode_tuple_pi(u: Rule, alphabet, reserved: ReservedNames = DEFAULT_RESERVED,
                    avoid=()) -> PiIn:
    names = _Names({*avoid, *alphabet, reserved.l1, reserved.r1})
    lc, rc, sc = names.take("lc"), names.take("rc"), names.take("sc")
    l1, r1 = reserved.l1, reserved.r1

    def emit(s):
        return PiOut(composite(u.target, s), (l1, r1))

    if u.move == LEFT:
        body = PiIn(lc, (sc, l1), nu([r1], par(_ifte_chain(sc, alphabet, emit), PiOut(r1, (u.write, rc)))))
    else:
        body = PiIn(rc, (sc, r1), nu([l1], par(_ifte_chain(sc, alphabet, emit), PiOut(l1, (u.write, lc)))))
    return PiIn(composite(u.source, u.read), (lc, rc), body)


def encode_transition_fn_pi(machine: Machine, reserved: ReservedNames = DEFAULT_RESERVED) -> Process:
    validate_names(machine)
    reserved.check(machine)
    avoid = _machine_names(machine, reserved)
    return par(*(Rep(encode_tuple_pi(u, machine.alphabet, reserved, avoid)) for u in machine.rules))


def encode_config_pi(machine: Machine, cfg: Configuration, budget,
                     reserved: ReservedNames = DEFAULT_RESERVED) -> Process:
    """``νl νr ( head output | tape chains )`` without the transition function."""
    avoid = _machine_names(machine, reserved)
    tape, l, r = encode_tape_pi(cfg.tape, budget, machine.blank, reserved, avoid)
    head = PiOut(composite(cfg.state, cfg.tape.head), (l, r))
    return nu([l, r], par(head, tape))


def encode_machine_pi(machine: Machine, cfg: Configuration, budget,
                      reserved: ReservedNames = DEFAULT_RESERVED) -> Process:
    validate_names(machine)
    reserved.check(machine)
    avoid = _machine_names(machine, reserved)
    tape, l, r = encode_tape_pi(cfg.tape, budget, machine.blank, reserved, avoid)
    head = PiOut(composite(cfg.state, cfg.tape.head), (l, r))
    return build([l, r], [head, tape, encode_transition_fn_pi(machine, reserved)])


def is_head_output(c: Process) -> bool:
    return isinstance(c, PiOut) and SEPARATOR in c.channel
