"""Line-oriented machine description files.

::

    # parity
    alphabet: b 1
    blank: b
    states: q0 q1 q2 q3
    start: q0
    rule: q0 b -> 1 L q2
    tape: 1 1 1
    head: 0
    reserved: e=e l=l l1=l1 r=r r1=r1
"""

from __future__ import annotations

import re
from pathlib import Path
from dataclasses import dataclass, field, fields

from .encoding import DEFAULT_RESERVED, EncodingError, ReservedNames
from .tm import Configuration, Machine, Rule, Tape, validate

KEYS = ("alphabet", "blank", "states", "start", "rule", "tape", "head", "reserved")
REQUIRED = ("alphabet", "blank", "states", "start")


@dataclass(frozen=True)
class Diagnostic:
    line: int
    column: int
    message: str

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.message}"


class MachineFileError(ValueError):
    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("\n".join(str(d) for d in diagnostics))


@dataclass(frozen=True)
class MachineSpec:
    machine: Machine
    tape: tuple[str, ...] = ()
    head: int = 0
    reserved: ReservedNames = field(default=DEFAULT_RESERVED)
    name: str = "machine"

    @property
    def config(self) -> Configuration:
        tape = Tape.from_cells(self.tape, self.head, self.machine.blank)
        return Configuration(self.machine.start, tape)


_WORD = re.compile(r"\S+")


def _words(text: str, offset: int) -> list[tuple[str, int]]:
    return [(m.group(), offset + m.start() + 1) for m in _WORD.finditer(text)]


def parse_machine(text: str, *, allow_nondet: bool = False, name: str = "machine") -> MachineSpec:
    """Parse and validate a machine file; every problem found is reported."""
    diags: list[Diagnostic] = []
    seen: dict[str, int] = {}
    values: dict[str, list[tuple[str, int]]] = {}
    rules: list[tuple[Rule, int]] = []
    reserved = DEFAULT_RESERVED
    lines: dict[str, int] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        key, sep, rest = line.partition(":")
        key_col = len(key) - len(key.lstrip()) + 1
        key = key.strip()
        if not sep:
            diags.append(Diagnostic(lineno, key_col, f"expected 'key: value', found {line.strip()!r}"))
            continue
        if key not in KEYS:
            diags.append(Diagnostic(lineno, key_col, f"unknown key {key!r}"))
            continue
        words = _words(rest, len(line) - len(rest))
        if key == "rule":
            rule = _parse_rule(words, lineno, len(line) - len(rest) + 1, diags)
            if rule is not None:
                rules.append((rule, lineno))
            continue
        if key in seen:
            diags.append(Diagnostic(lineno, key_col, f"duplicate key {key!r} (first on line {seen[key]})"))
            continue
        seen[key] = lineno
        lines[key] = lineno
        if key == "reserved":
            reserved = _parse_reserved(words, lineno, diags)
        else:
            values[key] = words

    for key in REQUIRED:
        if key not in seen:
            diags.append(Diagnostic(1, 1, f"missing required key {key!r}"))
    singles = {}
    for key in ("blank", "start", "head"):
        if key in values:
            words = values[key]
            if len(words) != 1:
                col = words[1][1] if len(words) > 1 else 1
                diags.append(Diagnostic(lines[key], col, f"{key} takes exactly one value"))
            else:
                singles[key] = words[0]
    if diags:
        raise MachineFileError(diags)

    machine = Machine(
        alphabet=tuple(w for w, _ in values["alphabet"]),
        blank=singles["blank"][0],
        states=tuple(w for w, _ in values["states"]),
        start=singles["start"][0],
        rules=tuple(r for r, _ in rules),
    )
    tape = tuple(w for w, _ in values.get("tape", []))
    head = 0
    if "head" in singles:
        word, col = singles["head"]
        if not word.isdigit():
            diags.append(Diagnostic(lines["head"], col, f"head must be a non-negative integer, found {word!r}"))
        else:
            head = int(word)
            if tape and head >= len(tape):
                diags.append(Diagnostic(lines["head"], col, f"head {head} outside tape of length {len(tape)}"))
            elif not tape and head != 0:
                diags.append(Diagnostic(lines["head"], col, "head must be 0 on an empty tape"))
    for word, col in values.get("tape", []):
        if word not in machine.alphabet:
            diags.append(Diagnostic(lines["tape"], col, f"tape symbol {word!r} not in alphabet"))

    rule_line = {r: ln for r, ln in rules}
    for v in validate(machine, allow_nondet=allow_nondet):
        diags.append(Diagnostic(_violation_line(v, machine, rule_line, lines), 1, str(v)))
    try:
        reserved.check(machine)
    except EncodingError as exc:
        diags.append(Diagnostic(lines.get("reserved", 1), 1, str(exc)))
    if diags:
        raise MachineFileError(diags)
    return MachineSpec(machine, tape, head, reserved, name)


def _violation_line(v, machine: Machine, rule_line: dict, lines: dict) -> int:
    for u in machine.rules:
        if str(u) in v.message:
            return rule_line[u]
    if v.code == "start-not-in-states":
        return lines.get("start", 1)
    if v.code == "blank-not-in-alphabet":
        return lines.get("blank", 1)
    if v.code == "nondeterministic":
        for u in machine.rules:
            if f"({u.source}, {u.read})" in v.message:
                return rule_line[u]
    return lines.get("states", 1)


def _parse_rule(words, lineno: int, end_col: int, diags: list) -> Rule | None:
    if len(words) != 6 or words[2][0] != "->":
        col = words[2][1] if len(words) > 2 and words[2][0] != "->" else (words[0][1] if words else end_col)
        diags.append(Diagnostic(lineno, col, "rule must read '<state> <symbol> -> <symbol> <L|R> <state>'"))
        return None
    (q, _), (s, _), _, (w, _), (d, dcol), (t, _) = words
    if d not in ("L", "R"):
        diags.append(Diagnostic(lineno, dcol, f"move must be L or R, found {d!r}"))
        return None
    return Rule(q, s, w, d, t)


def _parse_reserved(words, lineno: int, diags: list) -> ReservedNames:
    allowed = {f.name for f in fields(ReservedNames)}
    chosen = {}
    for word, col in words:
        k, eq, v = word.partition("=")
        if not eq or not v:
            diags.append(Diagnostic(lineno, col, f"expected name=value, found {word!r}"))
        elif k not in allowed:
            diags.append(Diagnostic(lineno, col, f"unknown reserved name {k!r}"))
        elif k in chosen:
            diags.append(Diagnostic(lineno, col, f"reserved name {k!r} given twice"))
        else:
            chosen[k] = v
    return ReservedNames(**chosen)


def render_machine(spec: MachineSpec) -> str:
    m = spec.machine
    out = [
        f"alphabet: {' '.join(m.alphabet)}",
        f"blank: {m.blank}",
        f"states: {' '.join(m.states)}",
        f"start: {m.start}",
    ]
    out += [f"rule: {u.source} {u.read} -> {u.write} {u.move} {u.target}" for u in m.rules]
    out.append(f"tape: {' '.join(spec.tape)}".rstrip())
    out.append(f"head: {spec.head}")
    if spec.reserved != DEFAULT_RESERVED:
        r = spec.reserved
        out.append(" ".join(["reserved:"] + [f"{f.name}={getattr(r, f.name)}" for f in fields(r)]))
    return "\n".join(out) + "\n"


def load_machine(path, *, allow_nondet: bool = False) -> MachineSpec:
    p = Path(path)
    return parse_machine(p.read_text(encoding="utf-8"), allow_nondet=allow_nondet, name=p.stem)
