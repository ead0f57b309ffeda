"""ACPC processes: one-sided pattern matching input against a term output."""

from __future__ import annotations

from dataclasses import dataclass

from .congruence import canonicalize
from .process import NIL, Calculus, Nil, Process, enter_scope, normalize, redexes
from .terms import (
    Binder,
    NameMatch,
    apply_subst,
    binding_names,
    free_names,
    match_term,
    pattern_well_formed,
    rename_binders,
    show,
    subst_pattern,
    term_names,
    tokens,
)


def _body(p: Process) -> str:
    s = p.pretty()
    return s if p.__class__.__name__ in ("Nil", "Output", "Input") else f"({s})"


@dataclass(frozen=True)
class Output(Process):
    term: object
    body: Process = NIL
    calculus = "acpc"

    def _free_names(self):
        return term_names(self.term) | self.body.fn

    def _subst(self, sigma):
        return Output(apply_subst(sigma, self.term), self.body.subst(sigma))

    def normalized(self, variables):
        if isinstance(self.body, Nil):
            return self
        return Output(self.term, normalize(self.body, variables))

    def key(self, kx):
        return ("out", kx.term(self.term), kx.process(self.body))

    def pretty(self):
        return f"out({show(self.term)}).{_body(self.body)}"


@dataclass(frozen=True)
class Input(Process):
    pattern: object
    body: Process = NIL
    calculus = "acpc"

    def __post_init__(self):
        if not pattern_well_formed(self.pattern):
            raise ValueError(f"ill-formed pattern {show(self.pattern)}")

    @property
    def binders(self) -> list[str]:
        return binding_names(self.pattern)

    def _free_names(self):
        return free_names(self.pattern) | (self.body.fn - set(self.binders))

    def _subst(self, sigma):
        binders = self.binders
        inner, renaming = enter_scope(sigma, binders, self.body.fn)
        pattern = subst_pattern(sigma, rename_binders(self.pattern, renaming))
        return Input(pattern, self.body.subst({**renaming, **inner}))

    def normalized(self, variables):
        if isinstance(self.body, Nil):
            return self
        return Input(self.pattern, normalize(self.body, variables | set(self.binders)))

    def key(self, kx):
        binders = self.binders
        index = {b: i for i, b in enumerate(binders)}

        def leaf(x):
            if isinstance(x, Binder):
                return ("B", index[x.name])
            return ("M",) + kx.name(x.name)

        return ("in", tuple(tokens(self.pattern, leaf)), kx.scope(binders).process(self.body))

    def pretty(self):
        return f"in({show(self.pattern)}).{_body(self.body)}"


def _interact(a, b):
    if isinstance(a, Output) and isinstance(b, Input):
        sigma = match_term(a.term, b.pattern)
        if sigma is not None:
            return [a.body, b.body.subst(sigma)]
    return None


def _role(c):
    if isinstance(c, Output):
        return "send"
    if isinstance(c, Input):
        return "recv"
    return None


def _channel(c):
    """The leftmost leaf, which both sides must agree on when it is a name-match."""
    x = c.term if isinstance(c, Output) else c.pattern
    while isinstance(x, tuple):
        x = x[0]
    if isinstance(x, str):
        return x
    if isinstance(x, NameMatch):
        return x.name
    return None


ACPC = Calculus("acpc", _interact, _role, _channel)


def dedup(successors: list[Process]) -> list[Process]:
    """Canonical forms of ``successors`` with congruent duplicates removed."""
    if len(successors) <= 1:
        return successors
    seen, out = set(), []
    for s in successors:
        cf = canonicalize(s)
        if cf.key not in seen:
            seen.add(cf.key)
            out.append(cf.process)
    return out


def redex_list(p: Process):
    return redexes(p, ACPC)


def reduce_candidates(p: Process) -> list[Process]:
    return dedup([r.successor for r in redexes(p, ACPC)])


def apply_subst_process(sigma: dict, p: Process) -> Process:
    return p.subst(sigma)


@dataclass(frozen=True)
class ReductionTrace:
    states: tuple[Process, ...]
    stop: str  # "normal", "max" or "ambiguous"

    @property
    def reductions(self) -> int:
        return len(self.states) - 1


def run_reductions(p: Process, max_steps: int, step=reduce_candidates) -> ReductionTrace:
    if max_steps < 0:
        raise ValueError("max must be non-negative")
    states = [p]
    for _ in range(max_steps):
        succ = step(states[-1])
        if not succ:
            return ReductionTrace(tuple(states), "normal")
        if len(succ) > 1:
            return ReductionTrace(tuple(states), "ambiguous")
        states.append(succ[0])
    stop = "normal" if not step(states[-1]) else "max"
    return ReductionTrace(tuple(states), stop)
