"""Single-tape Turing Machines with a finite, explicitly materialised tape window.

Cells outside the window are implicitly blank.  A move past the edge of the
window materialises exactly one blank on that side, which becomes the new head
cell; the vacated cell stays in the window.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

LEFT = "L"
RIGHT = "R"


class StuckError(Exception):
    """A non-terminating state has no rule for the symbol under the head."""


@dataclass(frozen=True)
class Rule:
    source: str
    read: str
    write: str
    move: str
    target: str

    def __str__(self) -> str:
        return f"<{self.source},{self.read},{self.write},{self.move},{self.target}>"


@dataclass(frozen=True)
class Machine:
    alphabet: tuple[str, ...]
    blank: str
    states: tuple[str, ...]
    start: str
    rules: tuple[Rule, ...] = ()

    def rules_from(self, state: str, symbol: str) -> list[Rule]:
        return [u for u in self.rules if u.source == state and u.read == symbol]


@dataclass(frozen=True)
class Tape:
    """Tape window; ``left`` and ``right`` list cells adjacent-to-head first."""

    left: tuple[str, ...]
    head: str
    right: tuple[str, ...]

    @classmethod
    def from_cells(cls, cells, head_index: int, blank: str) -> Tape:
        cells = tuple(cells)
        if not cells:
            return cls((), blank, ())
        if not 0 <= head_index < len(cells):
            raise ValueError(f"head index {head_index} outside tape of length {len(cells)}")
        return cls(tuple(reversed(cells[:head_index])), cells[head_index], cells[head_index + 1:])

    def cells(self) -> tuple[tuple[str, ...], int]:
        """Left-to-right cell list and the head index into it."""
        return tuple(reversed(self.left)) + (self.head,) + self.right, len(self.left)

    def __str__(self) -> str:
        cells, i = self.cells()
        shown = [f"*{s}*" if k == i else s for k, s in enumerate(cells)]
        return "<..," + ",".join(shown) + ",..>"


@dataclass(frozen=True)
class Configuration:
    state: str
    tape: Tape

    def __str__(self) -> str:
        return f"({self.state}, {self.tape})"


@dataclass(frozen=True)
class TmTrace:
    configs: tuple[Configuration, ...]
    halted: bool

    @property
    def final(self) -> Configuration:
        return self.configs[-1]

    def __len__(self) -> int:
        return len(self.configs)


@dataclass(frozen=True)
class Violation:
    code: str
    message: str

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


def validate(machine: Machine, *, allow_nondet: bool = False) -> list[Violation]:
    """Every broken invariant of ``machine``; an empty list means it is valid."""
    out: list[Violation] = []
    symbols, states = set(machine.alphabet), set(machine.states)
    for kind, names in (("symbol", machine.alphabet), ("state", machine.states)):
        for name, n in Counter(names).items():
            if n > 1:
                out.append(Violation("duplicate-name", f"{kind} {name} declared {n} times"))
    if machine.blank not in symbols:
        out.append(Violation("blank-not-in-alphabet", f"blank {machine.blank} not in alphabet"))
    if machine.start not in states:
        out.append(Violation("start-not-in-states", f"start {machine.start} not in states"))
    for name in sorted(symbols & states):
        out.append(Violation("name-overlap", f"{name} is both a state and a symbol"))
    for u in machine.rules:
        for q in (u.source, u.target):
            if q not in states:
                out.append(Violation("unknown-state", f"rule {u} names unknown state {q}"))
        for s in (u.read, u.write):
            if s not in symbols:
                out.append(Violation("unknown-symbol", f"rule {u} names unknown symbol {s}"))
        if u.move not in (LEFT, RIGHT):
            out.append(Violation("bad-move", f"rule {u} moves {u.move!r}, expected L or R"))
    if not allow_nondet:
        pairs = Counter((u.source, u.read) for u in machine.rules)
        for (q, s), n in pairs.items():
            if n > 1:
                out.append(Violation("nondeterministic", f"nondeterministic pair ({q}, {s}): {n} rules"))
    for q in machine.states:
        if is_terminating(machine, q):
            continue
        missing = [s for s in machine.alphabet if not machine.rules_from(q, s)]
        if missing:
            out.append(Violation("not-total", f"state {q} not total: no rule for {', '.join(missing)}"))
    return out


def is_terminating(machine: Machine, state: str) -> bool:
    if state not in machine.states:
        raise ValueError(f"unknown state {state}")
    return not any(u.source == state for u in machine.rules)


def apply_rule(machine: Machine, cfg: Configuration, rule: Rule) -> Configuration:
    tape = cfg.tape
    if rule.move == LEFT:
        if tape.left:
            new = Tape(tape.left[1:], tape.left[0], (rule.write,) + tape.right)
        else:
            new = Tape((), machine.blank, (rule.write,) + tape.right)
    else:
        if tape.right:
            new = Tape((rule.write,) + tape.left, tape.right[0], tape.right[1:])
        else:
            new = Tape((rule.write,) + tape.left, machine.blank, ())
    return Configuration(rule.target, new)


def successors(machine: Machine, cfg: Configuration) -> list[Configuration]:
    """All one-step successors; empty iff ``cfg.state`` is terminating."""
    if is_terminating(machine, cfg.state):
        return []
    rules = machine.rules_from(cfg.state, cfg.tape.head)
    if not rules:
        raise StuckError(f"state {cfg.state} has no rule for symbol {cfg.tape.head}")
    return [apply_rule(machine, cfg, u) for u in rules]


def step(machine: Machine, cfg: Configuration) -> Configuration | None:
    """The successor configuration, or None when the machine has halted."""
    nxt = successors(machine, cfg)
    if not nxt:
        return None
    if len(nxt) > 1:
        raise ValueError(f"nondeterministic step from {cfg}")
    return nxt[0]


def run(machine: Machine, cfg: Configuration, max_steps: int) -> TmTrace:
    if max_steps < 0:
        raise ValueError("max_steps must be non-negative")
    configs = [cfg]
    for _ in range(max_steps):
        nxt = step(machine, configs[-1])
        if nxt is None:
            break
        configs.append(nxt)
    return TmTrace(tuple(configs), is_terminating(machine, configs[-1].state))


def parity_machine() -> Machine:
    """The unary parity machine: halts on 1 for even input, on the blank for odd."""
    rules = (
        Rule("q0", "b", "1", LEFT, "q2"),
        Rule("q0", "1", "b", RIGHT, "q1"),
        Rule("q1", "b", "b", LEFT, "q3"),
        Rule("q1", "1", "b", RIGHT, "q0"),
        Rule("q2", "b", "b", RIGHT, "q3"),
        Rule("q2", "1", "b", RIGHT, "q3"),
    )
    return Machine(("b", "1"), "b", ("q0", "q1", "q2", "q3"), "q0", rules)


def unary(n: int, symbol: str = "1", blank: str = "b") -> Tape:
    """Head on the first of ``n`` consecutive ``symbol`` cells."""
    return Tape.from_cells([symbol] * n, 0, blank)
