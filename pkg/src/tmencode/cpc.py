"""Concurrent Pattern Calculus: symmetric pattern unification between cases."""

from __future__ import annotations

from dataclasses import dataclass

from . import acpc
from .encoding import DEFAULT_RESERVED, encode_config, encode_machine, encode_transition_fn
from .process import NIL, Calculus, Nil, Par, Process, Rep, Res, enter_scope, normalize, redexes
from .terms import Binder, Compound, NameMatch, binding_names, leaves, pattern_well_formed, rebuild, show, tokens


@dataclass(frozen=True)
class Protected:
    name: str


def communicable(p) -> bool:
    """No binders and no protected names: the pattern is also a term."""
    return all(isinstance(x, str) for x in leaves(p))


def unify(p, q):
    """``(σ, ρ)`` with σ for ``p``'s binders and ρ for ``q``'s, or None."""
    sigma, rho = {}, {}
    stack = [(p, q)]
    while stack:
        a, b = stack.pop()
        if isinstance(a, Binder):
            if not communicable(b):
                return None
            sigma[a.name] = b
        elif isinstance(b, Binder):
            if not communicable(a):
                return None
            rho[b.name] = a
        elif isinstance(a, Compound) and isinstance(b, Compound):
            stack.append((a.right, b.right))
            stack.append((a.left, b.left))
        elif isinstance(a, (str, Protected)) and isinstance(b, (str, Protected)):
            if _name(a) != _name(b):
                return None
        else:
            return None
    return sigma, rho


def _name(x) -> str:
    return x.name if isinstance(x, Protected) else x


def _subst_pattern(sigma: dict, p):
    def leaf(x):
        if isinstance(x, str) and x in sigma:
            return sigma[x]
        if isinstance(x, Protected) and x.name in sigma:
            return rebuild(sigma[x.name], Protected)
        return x

    return rebuild(p, leaf)


def _show(p) -> str:
    return show(rebuild(p, lambda x: f"[{x.name}]" if isinstance(x, Protected) else x))


@dataclass(frozen=True)
class Case(Process):
    pattern: object
    body: Process = NIL
    calculus = "cpc"

    def __post_init__(self):
        if not pattern_well_formed(self.pattern):
            raise ValueError(f"ill-formed pattern {_show(self.pattern)}")

    @property
    def binders(self) -> list[str]:
        return binding_names(self.pattern)

    @property
    def output_shaped(self) -> bool:
        return communicable(self.pattern)

    def _free_names(self):
        names = {_name(x) for x in leaves(self.pattern) if not isinstance(x, Binder)}
        return names | (self.body.fn - set(self.binders))

    def _subst(self, sigma):
        inner, renaming = enter_scope(sigma, self.binders, self.body.fn)
        pattern = rebuild(self.pattern, lambda x: Binder(renaming.get(x.name, x.name))
                          if isinstance(x, Binder) else x)
        return Case(_subst_pattern(sigma, pattern), self.body.subst({**renaming, **inner}))

    def normalized(self, variables):
        if isinstance(self.body, Nil):
            return self
        return Case(self.pattern, normalize(self.body, variables | set(self.binders)))

    def key(self, kx):
        binders = self.binders
        index = {b: i for i, b in enumerate(binders)}

        def leaf(x):
            if isinstance(x, Binder):
                return ("B", index[x.name])
            if isinstance(x, Protected):
                return ("R",) + kx.name(x.name)
            return kx.name(x)

        return ("case", tuple(tokens(self.pattern, leaf)), kx.scope(binders).process(self.body))

    def pretty(self):
        body = self.body.pretty()
        if not isinstance(self.body, (Nil, Case)):
            body = f"({body})"
        return f"{_show(self.pattern)} -> {body}"


def _interact(a, b):
    u = unify(a.pattern, b.pattern)
    if u is None:
        return None
    sigma, rho = u
    return [a.body.subst(sigma), b.body.subst(rho)]


def _channel(c):
    x = c.pattern
    while isinstance(x, tuple):
        x = x[0]
    return None if isinstance(x, Binder) else _name(x)


CPC = Calculus("cpc", _interact, lambda c: "both" if isinstance(c, Case) else None, _channel)


def redex_list(p: Process):
    return redexes(p, CPC)


def reduce_candidates(p: Process) -> list[Process]:
    return acpc.dedup([r.successor for r in redexes(p, CPC)])


def from_acpc(p: Process) -> Process:
    """Outputs and inputs become cases; name-matches become plain names."""
    if isinstance(p, acpc.Output):
        return Case(p.term, from_acpc(p.body))
    if isinstance(p, acpc.Input):
        pattern = rebuild(p.pattern, lambda x: x.name if isinstance(x, NameMatch) else x)
        return Case(pattern, from_acpc(p.body))
    if isinstance(p, Par):
        return Par(tuple(from_acpc(x) for x in p.parts))
    if isinstance(p, Rep):
        return Rep(from_acpc(p.body))
    if isinstance(p, Res):
        return Res(p.names, from_acpc(p.body))
    if isinstance(p, Nil):
        return p
    raise TypeError(f"not an ACPC process: {p!r}")


def encode_machine_cpc(machine, cfg, reserved=None) -> Process:
    return from_acpc(encode_machine(machine, cfg, reserved or DEFAULT_RESERVED))


def encode_config_cpc(cfg, reserved=None) -> Process:
    return from_acpc(encode_config(cfg, reserved or DEFAULT_RESERVED))


def encode_transition_fn_cpc(machine, reserved=None) -> Process:
    return from_acpc(encode_transition_fn(machine, reserved or DEFAULT_RESERVED))
