"""Terms, patterns and one-sided matching for the asymmetric pattern calculus.

Names are plain strings.  A term is a name or a ``Compound`` of two terms; a
pattern is a ``Binder``, a ``NameMatch`` or a ``Compound`` of two patterns.
Encoded tapes nest one compound per cell, so every traversal here is
iterative rather than recursive.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, NamedTuple, Union

Name = str


class Compound(NamedTuple):
    left: object
    right: object


@dataclass(frozen=True)
class Binder:
    name: Name


@dataclass(frozen=True)
class NameMatch:
    name: Name


Term = Union[Name, Compound]
Pattern = Union[Binder, NameMatch, Compound]
Substitution = dict


class IllFormedPattern(ValueError):
    pass


def compound(*parts):
    """Left-associated compound: ``compound(a, b, c)`` is ``(a•b)•c``."""
    if not parts:
        raise ValueError("compound of nothing")
    acc = parts[0]
    for p in parts[1:]:
        acc = Compound(acc, p)
    return acc


def leaves(t) -> list:
    """Leaves of a term or pattern, left to right."""
    out, stack = [], [t]
    while stack:
        x = stack.pop()
        if isinstance(x, tuple):
            stack.append(x[1])
            stack.append(x[0])
        else:
            out.append(x)
    return out


def term_names(t: Term) -> set[Name]:
    return set(leaves(t))


def binding_names(t) -> list[Name]:
    """Binder names of a pattern in left-to-right order (a term has none)."""
    return [x.name for x in leaves(t) if isinstance(x, Binder)]


def free_names(t) -> set[Name]:
    """Names of a term, or the name-matches of a pattern."""
    out = set()
    for x in leaves(t):
        if isinstance(x, str):
            out.add(x)
        elif isinstance(x, NameMatch):
            out.add(x.name)
    return out


def pattern_well_formed(p: Pattern) -> bool:
    names = binding_names(p)
    return len(names) == len(set(names))


def is_term(t) -> bool:
    return all(isinstance(x, str) for x in leaves(t))


def match_term(t: Term, p: Pattern) -> Substitution | None:
    """Match ``t`` against ``p``; None when the match is undefined."""
    if not pattern_well_formed(p):
        raise IllFormedPattern(f"binder repeated in {show(p)}")
    sigma: Substitution = {}
    stack = [(t, p)]
    while stack:
        t, p = stack.pop()
        if isinstance(p, Binder):
            sigma[p.name] = t
        elif isinstance(p, NameMatch):
            if not isinstance(t, str) or t != p.name:
                return None
        elif isinstance(p, Compound):
            if not isinstance(t, Compound):
                return None
            stack.append((t.right, p.right))
            stack.append((t.left, p.left))
        else:
            raise IllFormedPattern(f"not a pattern: {p!r}")
    return sigma


def rebuild(t, leaf: Callable):
    """Copy a term or pattern, replacing each leaf ``x`` with ``leaf(x)``.

    Works for any binary tuple node (``Compound`` here, ``Pair`` for Psi) and
    preserves the node class.
    """
    if not isinstance(t, tuple):
        return leaf(t)
    # post-order over an explicit stack; results accumulate on ``done``
    done: list = []
    stack: list = [(t, False)]
    while stack:
        x, expanded = stack.pop()
        if not isinstance(x, tuple):
            done.append(leaf(x))
        elif expanded:
            r = done.pop()
            l = done.pop()
            done.append(type(x)(l, r))
        else:
            stack.append((x, True))
            stack.append((x[1], False))
            stack.append((x[0], False))
    return done[0]


def apply_subst(sigma: Substitution, t: Term) -> Term:
    if not sigma:
        return t
    return rebuild(t, lambda n: sigma.get(n, n))


def as_pattern(t: Term) -> Pattern:
    """A term read as the pattern that matches exactly that term."""
    return rebuild(t, NameMatch)


def subst_pattern(sigma: Substitution, p: Pattern) -> Pattern:
    """Apply ``sigma`` to the name-matches of ``p``; binders are untouched."""
    if not sigma:
        return p

    def leaf(x):
        if isinstance(x, NameMatch) and x.name in sigma:
            return as_pattern(sigma[x.name])
        return x

    return rebuild(p, leaf)


def rename_binders(p: Pattern, mapping: dict[Name, Name]) -> Pattern:
    return rebuild(p, lambda x: Binder(mapping.get(x.name, x.name)) if isinstance(x, Binder) else x)


def erase_binders(p: Pattern) -> Term:
    """The term obtained by reading every binder and name-match as its name."""
    return rebuild(p, lambda x: x.name)


def tokens(t, token: Callable) -> list:
    """Flat prefix serialisation; ``token`` maps each leaf to a tuple."""
    out, stack = [], [t]
    while stack:
        x = stack.pop()
        if isinstance(x, tuple):
            out.append(("C",) if isinstance(x, Compound) else ("T",))
            stack.append(x[1])
            stack.append(x[0])
        else:
            out.append(token(x))
    return out


def show(t, bullet: str = "•") -> str:
    """Every compound below the root is parenthesised."""
    parts: list[str] = []
    stack: list = [(t, True)]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            parts.append(item)
            continue
        x, top = item
        if isinstance(x, Compound):
            seq = [(x.left, False), bullet, (x.right, False)]
            if not top:
                seq = ["("] + seq + [")"]
            stack.extend(reversed(seq))
        elif isinstance(x, tuple):
            stack.extend(reversed(["(", (x[0], False), ", ", (x[1], False), ")"]))
        elif isinstance(x, Binder):
            parts.append("λ" + x.name)
        elif isinstance(x, NameMatch):
            parts.append(x.name)
        else:
            parts.append(str(x))
    return "".join(parts)


_TOKEN = re.compile(r"\s*(?:(?P<punct>[()•*λ\\])|(?P<name>[^\s()•*λ\\]+))")


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at column {pos + 1}")
        self.pos = pos


def _lex(text: str) -> list[tuple[str, str, int]]:
    out, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError("unexpected character", pos)
        kind = "punct" if m.group("punct") else "name"
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str, pattern: bool):
        self.toks = _lex(text)
        self.i = 0
        self.pattern = pattern
        self.end = len(text)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("eof", "", self.end)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expr(self):
        acc = self.atom()
        while self.peek()[1] in ("•", "*"):
            self.take()
            acc = Compound(acc, self.atom())
        return acc

    def atom(self):
        kind, val, pos = self.take()
        if kind == "name":
            return NameMatch(val) if self.pattern else val
        if val == "(":
            inner = self.expr()
            if self.take()[1] != ")":
                raise ParseError("expected )", pos)
            return inner
        if val in ("λ", "\\"):
            if not self.pattern:
                raise ParseError("binder in a term", pos)
            kind, name, pos = self.take()
            if kind != "name":
                raise ParseError("expected binder name", pos)
            return Binder(name)
        raise ParseError(f"unexpected {val or 'end of input'}", pos)

    def parse(self):
        out = self.expr()
        kind, val, pos = self.peek()
        if kind != "eof":
            raise ParseError(f"trailing {val}", pos)
        return out


def parse_term(text: str) -> Term:
    """Parse ``a•(b•c)``; ``*`` may stand in for ``•``; compounds associate left."""
    return _Parser(text, pattern=False).parse()


def parse_pattern(text: str) -> Pattern:
    """Parse ``λx•a``; bare names are name-matches, ``\\x`` is accepted for ``λx``."""
    return _Parser(text, pattern=True).parse()
