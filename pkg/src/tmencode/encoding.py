"""Finite-term encoding of Turing Machines into ACPC.

The tape window becomes ``(L • head) • R`` where the left list nests to the
left and the right list to the right, both terminated by the edge name ``e``.
Each rule becomes two replicated inputs: one for a move inside the window and
one that inserts a fresh blank at the edge.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

from .acpc import Input, Output
from .process import Process, Rep, par, split
from .terms import Binder, Compound, NameMatch, show
from .tm import LEFT, Configuration, Machine, Rule, Tape


class EncodingError(ValueError):
    pass


class DecodeError(ValueError):
    """A term that is not the image of any configuration; ``path`` locates the fault."""

    def __init__(self, message: str, path: str = ""):
        super().__init__(f"{message} at {path or 'root'}")
        self.path = path


@dataclass(frozen=True)
class ReservedNames:
    e: str = "e"
    l: str = "l"
    l1: str = "l1"
    r: str = "r"
    r1: str = "r1"

    def names(self) -> tuple[str, ...]:
        return tuple(getattr(self, f.name) for f in fields(self))

    def check(self, machine: Machine) -> None:
        names = self.names()
        if len(set(names)) != len(names):
            raise EncodingError(f"reserved names must be distinct: {' '.join(names)}")
        clash = set(names) & (set(machine.alphabet) | set(machine.states))
        if clash:
            raise EncodingError(f"reserved names clash with machine names: {', '.join(sorted(clash))}")


DEFAULT_RESERVED = ReservedNames()


def encode_tape(tape: Tape, reserved: ReservedNames = DEFAULT_RESERVED) -> Compound:
    e = reserved.e
    for s in (*tape.left, tape.head, *tape.right):
        if s in reserved.names():
            raise EncodingError(f"tape symbol {s} is a reserved name")
    left = e
    for s in reversed(tape.left):
        left = Compound(left, s)
    right = e
    for s in reversed(tape.right):
        right = Compound(s, right)
    return Compound(Compound(left, tape.head), right)


def encode_config(cfg: Configuration, reserved: ReservedNames = DEFAULT_RESERVED) -> Output:
    if cfg.state in reserved.names():
        raise EncodingError(f"state {cfg.state} is a reserved name")
    return Output(Compound(cfg.state, encode_tape(cfg.tape, reserved)))


def tuple_branches(u: Rule, blank: str, reserved: ReservedNames = DEFAULT_RESERVED):
    """The (main, edge) pairs of (pattern, result term) for rule ``u``.

    Binders appear as ``Binder`` in the pattern and as plain names in the
    result; every other leaf of the pattern is a ``NameMatch``.
    """
    n = reserved
    qi, s1, s2, qj = NameMatch(u.source), NameMatch(u.read), u.write, u.target
    e = NameMatch(n.e)
    C = Compound
    if u.move == LEFT:
        main = (C(qi, C(C(C(Binder(n.l), Binder(n.l1)), s1), Binder(n.r))),
                C(qj, C(C(n.l, n.l1), C(s2, n.r))))
        edge = (C(qi, C(C(e, s1), Binder(n.r))),
                C(qj, C(C(n.e, blank), C(s2, n.r))))
    else:
        main = (C(qi, C(C(Binder(n.l), s1), C(Binder(n.r1), Binder(n.r)))),
                C(qj, C(C(C(n.l, s2), n.r1), n.r)))
        edge = (C(qi, C(C(Binder(n.l), s1), e)),
                C(qj, C(C(C(n.l, s2), blank), n.e)))
    return main, edge


def encode_tuple(u: Rule, blank: str, reserved: ReservedNames = DEFAULT_RESERVED) -> Process:
    return par(*(Rep(Input(p, Output(t))) for p, t in tuple_branches(u, blank, reserved)))


def encode_transition_fn(machine: Machine, reserved: ReservedNames = DEFAULT_RESERVED) -> Process:
    reserved.check(machine)
    return par(*(encode_tuple(u, machine.blank, reserved) for u in machine.rules))


def encode_machine(machine: Machine, cfg: Configuration,
                   reserved: ReservedNames = DEFAULT_RESERVED) -> Process:
    reserved.check(machine)
    return par(encode_config(cfg, reserved), encode_transition_fn(machine, reserved))


def _symbol(t, machine: Machine, path: str) -> str:
    if not isinstance(t, str) or t not in machine.alphabet:
        raise DecodeError(f"expected a symbol, found {show(t)}", path)
    return t


def decode_tape(t, machine: Machine, reserved: ReservedNames = DEFAULT_RESERVED) -> Tape:
    if not isinstance(t, Compound) or not isinstance(t.left, Compound):
        raise DecodeError("expected (left•head)•right", "tape")
    lt, head = t.left.left, _symbol(t.left.right, machine, "tape.head")
    left, path = [], "tape.left"
    while lt != reserved.e:
        if not isinstance(lt, Compound):
            raise DecodeError(f"left list must end in {reserved.e}", path)
        left.append(_symbol(lt.right, machine, path + ".cell"))
        lt, path = lt.left, path + ".next"
    right, rt, path = [], t.right, "tape.right"
    while rt != reserved.e:
        if not isinstance(rt, Compound):
            raise DecodeError(f"right list must end in {reserved.e}", path)
        right.append(_symbol(rt.left, machine, path + ".cell"))
        rt, path = rt.right, path + ".next"
    return Tape(tuple(left), head, tuple(right))


def decode_config(t, machine: Machine, reserved: ReservedNames = DEFAULT_RESERVED) -> Configuration:
    """Inverse of the configuration encoding on the term ``q • tape``."""
    if isinstance(t, Output):
        t = t.term
    if not isinstance(t, Compound):
        raise DecodeError("expected state•tape", "")
    if not isinstance(t.left, str) or t.left not in machine.states:
        raise DecodeError(f"expected a state, found {show(t.left)}", "state")
    return Configuration(t.left, decode_tape(t.right, machine, reserved))


def transition_outputs(p: Process) -> list[Output]:
    """Top-level outputs of a normal-form process."""
    return [c for c in split(p)[1] if isinstance(c, Output)]

