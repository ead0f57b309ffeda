"""Process syntax shared by every calculus, plus structural normalisation and
redex enumeration.

The structural constructors (``Nil``, ``Par``, ``Rep``, ``Res``) are common to
all four calculi; each calculus module adds its own prefix forms.  A process
in *normal form* is ``Res(names, Par(components))`` where every component is
a prefix, a replication or an unresolved conditional, and every body is itself
in normal form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable

from .terms import free_names as value_names


def fresh(base: str, avoid) -> str:
    """``base'``, ``base'2``, ... : the first variant not in ``avoid``."""
    cand = base + "'"
    k = 2
    while cand in avoid:
        cand = f"{base}'{k}"
        k += 1
    return cand


def enter_scope(sigma: dict, binders, scope_fn) -> tuple[dict, dict]:
    """Push ``sigma`` under ``binders`` whose scope has free names ``scope_fn``.

    Returns the restricted substitution and an α-renaming for binders that
    would capture a name carried in by ``sigma``.
    """
    sigma = {k: v for k, v in sigma.items() if k in scope_fn and k not in binders}
    if not sigma:
        return sigma, {}
    incoming: set = set()
    for v in sigma.values():
        incoming |= value_names(v)
    renaming = {}
    avoid = None
    for b in binders:
        if b in incoming:
            if avoid is None:
                avoid = incoming | set(scope_fn) | set(sigma) | set(binders)
            nb = fresh(b, avoid)
            avoid.add(nb)
            renaming[b] = nb
    return sigma, renaming


class Process:
    calculus: str | None = None

    @cached_property
    def fn(self) -> frozenset:
        return frozenset(self._free_names())

    def _free_names(self) -> set:
        raise NotImplementedError

    @cached_property
    def tags(self) -> frozenset:
        """Calculi whose prefixes occur anywhere in this process."""
        out = {self.calculus} if self.calculus else set()
        for child in self.children():
            out |= child.tags
        return frozenset(out)

    def children(self) -> tuple:
        return tuple(getattr(self, a) for a in ("body", "then", "orelse") if hasattr(self, a))

    def subst(self, sigma: dict) -> Process:
        """Capture-avoiding application of ``sigma`` (name -> value)."""
        if not sigma or self.fn.isdisjoint(sigma):
            return self
        return self._subst(sigma)

    def _subst(self, sigma: dict) -> Process:
        raise NotImplementedError

    def normalized(self, variables: frozenset) -> Process:
        """This component with its bodies in normal form."""
        return self

    def resolve(self, variables: frozenset) -> Process | None:
        """A structurally equal process to splice in place of this one, if any."""
        return None

    def key(self, kx) -> tuple:
        raise NotImplementedError

    def pretty(self) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.pretty()


def _atom(p: Process) -> str:
    s = p.pretty()
    return f"({s})" if isinstance(p, Par) else s


@dataclass(frozen=True, eq=True)
class Nil(Process):
    def _free_names(self):
        return set()

    def _subst(self, sigma):
        return self

    def key(self, kx):
        return ("0",)

    def pretty(self):
        return "0"


NIL = Nil()


@dataclass(frozen=True)
class Par(Process):
    parts: tuple[Process, ...]

    def _free_names(self):
        out = set()
        for p in self.parts:
            out |= p.fn
        return out

    def children(self):
        return self.parts

    def _subst(self, sigma):
        return Par(tuple(p.subst(sigma) for p in self.parts))

    def key(self, kx):
        return kx.process(self)

    def pretty(self):
        return " | ".join(_atom(p) for p in self.parts)


@dataclass(frozen=True)
class Rep(Process):
    body: Process

    def _free_names(self):
        return set(self.body.fn)

    def _subst(self, sigma):
        return Rep(self.body.subst(sigma))

    def normalized(self, variables):
        return Rep(normalize(self.body, variables))

    def key(self, kx):
        return ("rep", kx.scope(()).process(self.body))

    def pretty(self):
        return "!" + _atom(self.body)


@dataclass(frozen=True)
class Res(Process):
    names: tuple[str, ...]
    body: Process

    def _free_names(self):
        return set(self.body.fn) - set(self.names)

    def _subst(self, sigma):
        inner, renaming = enter_scope(sigma, self.names, self.body.fn)
        if not inner:
            return self
        names = tuple(renaming.get(n, n) for n in self.names)
        return Res(names, self.body.subst({**renaming, **inner}))

    def key(self, kx):
        return kx.process(self)

    def pretty(self):
        return "".join(f"ν{n}." for n in self.names) + _atom(self.body)


def par(*parts: Process) -> Process:
    parts = tuple(p for p in parts if not isinstance(p, Nil))
    if not parts:
        return NIL
    if len(parts) == 1:
        return parts[0]
    return Par(parts)


def nu(names: Iterable[str], body: Process) -> Process:
    names = tuple(names)
    return Res(names, body) if names else body


def split(p: Process) -> tuple[tuple[str, ...], tuple[Process, ...]]:
    """Restricted names and parallel components of a normal-form process."""
    names: tuple[str, ...] = ()
    while isinstance(p, Res):
        names += p.names
        p = p.body
    if isinstance(p, Nil):
        return names, ()
    if isinstance(p, Par):
        return names, p.parts
    return names, (p,)


def build(names, comps) -> Process:
    return nu(names, par(*comps))


def build_normal(names, comps) -> Process:
    """``build`` for a known normal form; later ``flatten`` calls reuse the split."""
    p = build(names, comps)
    if not isinstance(p, Nil):
        object.__setattr__(p, "_normal", (tuple(names), tuple(comps)))
    return p


def _absorb(items, group: list, comps: list, taken: set, variables: frozenset) -> None:
    stack = list(reversed(items))
    while stack:
        p = stack.pop()
        if isinstance(p, Nil):
            continue
        if isinstance(p, Par):
            stack.extend(reversed(p.parts))
        elif isinstance(p, Res):
            renaming = {}
            for n in p.names:
                if n in taken:
                    renaming[n] = m = fresh(n, taken)
                    taken.add(m)
                else:
                    taken.add(n)
            group.extend(renaming.get(n, n) for n in p.names)
            stack.append(p.body.subst(renaming) if renaming else p.body)
        else:
            branch = p.resolve(variables)
            if branch is not None:
                stack.append(branch)
            else:
                comps.append(p.normalized(variables))


def _prune(group: list, comps: list) -> tuple[tuple[str, ...], tuple[Process, ...]]:
    used: set = set()
    for c in comps:
        used |= c.fn
    return tuple(n for n in group if n in used), tuple(comps)


def flatten(p: Process, variables: frozenset = frozenset()):
    """Extrude restrictions and flatten parallel composition.

    Applies ``P|0 ≡ P``, associativity, scope extrusion (α-renaming clashing
    restricted names), ``νa 0 ≡ 0`` and conditional resolution.  Names in
    ``variables`` are bound by an enclosing input and never resolved.
    """
    if not variables:
        known = p.__dict__.get("_normal")
        if known is not None:
            return known
    group: list = []
    comps: list = []
    _absorb([p], group, comps, set(p.fn), variables)
    return _prune(group, comps)


def extend(group, comps, extra, variables: frozenset = frozenset()):
    """Normal form of ``ν group (comps | extra...)`` when ``comps`` are already normal."""
    taken = set(group)
    for c in comps:
        taken |= c.fn
    for p in extra:
        taken |= p.fn
    group, comps = list(group), list(comps)
    _absorb(list(extra), group, comps, taken, variables)
    return _prune(group, comps)


def normalize(p: Process, variables: frozenset = frozenset()) -> Process:
    if variables:
        return build(*flatten(p, variables))
    return build_normal(*flatten(p))


@dataclass(frozen=True)
class Calculus:
    """Interaction rule of one calculus, as seen by the redex enumerator.

    ``interact(a, b)`` returns the processes replacing the pair, or None.
    ``role`` is ``"send"``, ``"recv"``, ``"both"`` (symmetric cases) or None
    for components that never interact directly.  ``channel`` gives a name
    both partners must share, or None when no cheap guard exists.
    """

    name: str
    interact: Callable
    role: Callable
    channel: Callable


@dataclass(frozen=True)
class Redex:
    first: Process
    second: Process
    successor: Process
    from_replication: tuple[bool, bool] = field(default=(False, False))


def redexes(p: Process, calc: Calculus) -> list[Redex]:
    """Every one-step reduction of ``p``, each replication unfolded at most once."""
    group, comps = flatten(p)
    taken: set | None = None
    slots = []  # (component, top index, copy index or None)
    copies = {}
    for i, c in enumerate(comps):
        if not isinstance(c, Rep):
            slots.append((c, i, None))
            continue
        cgroup, ccomps = flatten(c.body)
        if cgroup:
            if taken is None:
                taken = set(group).union(*(x.fn for x in comps))
            taken.update(cgroup)
            renaming = {}
            for n in cgroup:
                renaming[n] = m = fresh(n, taken)
                taken.add(m)
            ccomps = tuple(x.subst(renaming) for x in ccomps)
            cgroup = tuple(renaming[n] for n in cgroup)
        copies[i] = (cgroup, ccomps)
        for k, cc in enumerate(ccomps):
            slots.append((cc, i, k))

    pairs = _candidate_pairs(slots, calc)
    out = []
    for a, b in pairs:
        (ca, ia, ka), (cb, ib, kb) = slots[a], slots[b]
        result = calc.interact(ca, cb)
        if result is None:
            continue
        new_group = list(group)
        keep = []
        used_copies = {i for i, k in ((ia, ka), (ib, kb)) if k is not None}
        for i, c in enumerate(comps):
            if i in (ia, ib) and i not in used_copies:
                continue
            keep.append(c)
        for i in sorted(used_copies):
            cgroup, ccomps = copies[i]
            new_group.extend(cgroup)
            for k, cc in enumerate(ccomps):
                if (i, k) not in ((ia, ka), (ib, kb)):
                    keep.append(cc)
        succ = build_normal(*extend(new_group, keep, result))
        out.append(Redex(ca, cb, succ, (ka is not None, kb is not None)))
    return out


def _role_channel(c: Process, calc: Calculus):
    cached = c.__dict__.get("_role_channel")
    if cached is None or cached[0] != calc.name:
        role = calc.role(c)
        cached = (calc.name, role, calc.channel(c) if role else None)
        object.__setattr__(c, "_role_channel", cached)
    return cached[1], cached[2]


def _candidate_pairs(slots, calc: Calculus) -> list[tuple[int, int]]:
    """Index pairs that might interact; a None channel matches any channel."""
    by_role: dict = {"send": {}, "recv": {}, "both": {}}
    for i, (c, _, _) in enumerate(slots):
        role, chan = _role_channel(c, calc)
        if role:
            by_role[role].setdefault(chan, []).append(i)
    pairs: set = set()
    both = by_role["both"]
    for chan, idx in both.items():
        partners = idx + both.get(None, []) if chan is not None else [j for v in both.values() for j in v]
        for i in idx:
            pairs.update((min(i, j), max(i, j)) for j in partners if j != i)
    sends, recvs = by_role["send"], by_role["recv"]
    all_sends = None
    for chan, idx in recvs.items():
        if chan is None:
            if all_sends is None:
                all_sends = [i for v in sends.values() for i in v]
            partners = all_sends
        else:
            partners = sends.get(chan, []) + sends.get(None, [])
        pairs.update((i, j) for i in partners for j in idx)
    return sorted(pairs)
