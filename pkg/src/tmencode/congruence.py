"""Canonical forms and structural congruence for all four calculi.

A canonical key is a nested tuple.  Free names appear as ``("N", name)``;
bound names appear as ``(kind, levels_up, index)`` where ``kind`` is ``"V"``
for restrictions and ``"I"`` for input binders, so keys are invariant under
α-conversion.  Restricted names of one parallel level are numbered by a
greedy walk outward from the free names: repeatedly take the least
component, preferring those that already touch a numbered name and then
comparing keys with still-unnumbered names masked, and number its unnumbered
names in order of occurrence.  Ties between distinct components are resolved
by trying each and keeping the least result, within a fixed budget.
"""

from __future__ import annotations

import hashlib
import heapq
from collections import Counter, defaultdict
from dataclasses import dataclass

from .process import Nil, Par, Process, Rep, Res, build_normal, normalize, split
from .terms import tokens

BRANCH_BUDGET = 512
_UNLABELED = 1 << 60
_OUTER = -1
_NIL_KEY = ("P", 0)


class CalculusMismatch(ValueError):
    pass


class _Scope:
    __slots__ = ("kind", "depth", "labels", "unlabeled")

    def __init__(self, kind: str, depth: int, labels: dict, unlabeled: set):
        self.kind = kind
        self.depth = depth
        self.labels = labels
        self.unlabeled = unlabeled


class Keyer:
    """Context for computing keys: the binders in scope and the current depth.

    In ``alpha`` mode processes are keyed as written (only bound names are
    abstracted); in ``canon`` mode each level is normalised and sorted.
    """

    def __init__(self, mode: str = "canon", scopes: tuple = (), depth: int = 0,
                 sink: list | None = None, budget: list | None = None):
        self.mode = mode
        self.scopes = scopes
        self.depth = depth
        self.sink = sink
        self.budget = budget if budget is not None else [BRANCH_BUDGET]

    def _derive(self, scopes=None, depth=None, sink=...):
        return Keyer(self.mode, self.scopes if scopes is None else scopes,
                     self.depth if depth is None else depth,
                     self.sink if sink is ... else sink, self.budget)

    def with_sink(self, sink: list | None) -> Keyer:
        return self._derive(sink=sink)

    def push(self, scope: _Scope) -> Keyer:
        return self._derive(scopes=self.scopes + (scope,))

    def scope(self, binders) -> Keyer:
        """Enter a prefix body that binds ``binders`` (in their canonical order)."""
        labels = {b: i for i, b in enumerate(binders)}
        depth = self.depth + 1
        return self._derive(scopes=self.scopes + (_Scope("I", depth, labels, set()),), depth=depth)

    def name(self, n: str) -> tuple:
        for sc in reversed(self.scopes):
            idx = sc.labels.get(n)
            if idx is not None:
                return (sc.kind, self.depth - sc.depth, idx)
            if n in sc.unlabeled:
                if self.sink is not None:
                    self.sink.append((id(sc), n))
                return ("W",)
        return ("N", n)

    def term(self, t, leaf=None) -> tuple:
        return tuple(tokens(t, leaf or self.name))

    def process(self, p: Process) -> tuple:
        if isinstance(p, Nil):
            return ("0",) if self.mode == "alpha" else _NIL_KEY
        if self.mode == "alpha":
            return self._alpha(p)
        return self._canon(p)[0]

    def _alpha(self, p: Process) -> tuple:
        names: tuple = ()
        while isinstance(p, Res):
            names += p.names
            p = p.body
        if names:
            labels = {n: i for i, n in enumerate(names)}
            inner = self._derive(scopes=self.scopes + (_Scope("V", self.depth + 1, labels, set()),),
                                 depth=self.depth + 1)
            return ("nu", len(names), inner._alpha(p))
        if isinstance(p, Nil):
            return ("0",)
        if isinstance(p, Par):
            return ("par",) + tuple(self._alpha(x) for x in p.parts)
        return p.key(self)

    def _canon(self, p: Process) -> tuple[tuple, list]:
        group, comps = split(p)
        comps = self._absorb_replicas(list(comps))
        if not group:
            ranked = [self._keyed(self, c) + (c,) for c in comps]
        else:
            ranked = self._label_group(group, comps)
        ranked.sort(key=lambda r: r[0])
        if self.sink is not None:
            for _, sink, _ in ranked:
                self.sink.extend(sink)
        key = ("P", len(group)) + tuple(r[0] for r in ranked)
        return key, [r[2] for r in ranked]

    @staticmethod
    def _keyed(kx: Keyer, c: Process) -> tuple[tuple, list]:
        sink: list = []
        return c.key(kx.with_sink(sink)), sink

    def _absorb_replicas(self, comps: list) -> list:
        """Apply ``P | !P -> !P`` until no replication absorbs a sibling."""
        if not any(isinstance(c, Rep) for c in comps):
            return comps
        throwaway = self.with_sink([])
        cache: dict = {}

        def key_of(c):
            k = cache.get(id(c))
            if k is None:
                k = cache[id(c)] = c.key(throwaway)
            return k

        changed = True
        while changed:
            changed = False
            for r in sorted((c for c in comps if isinstance(c, Rep)), key=lambda c: (_rep_depth(c), key_of(c))):
                bgroup, bcomps = split(r.body)
                if bgroup or not bcomps:
                    continue
                bcomps = self._absorb_replicas(list(bcomps))
                want = Counter(key_of(b) for b in bcomps)
                kinds = {type(b) for b in bcomps}
                avail: dict = defaultdict(list)
                for j, c in enumerate(comps):
                    if c is not r and type(c) in kinds:
                        avail[key_of(c)].append(j)
                if all(len(avail[k]) >= m for k, m in want.items()):
                    drop = {j for k, m in want.items() for j in avail[k][:m]}
                    comps = [c for j, c in enumerate(comps) if j not in drop]
                    changed = True
                    break
        return comps

    def _label_group(self, group, comps) -> list:
        scope = _Scope("V", self.depth, {}, set(group))
        kx = self.push(scope)
        shapes = []
        for c in comps:
            mask, sink = self._keyed(kx, c)
            shapes.append((mask, sink, c))
        labels = self._greedy(id(scope), set(group), shapes, {})
        return [self._finish(id(scope), labels, s) for s in shapes]

    @staticmethod
    def _vector(sid: int, labels: dict, sink: list, unlabeled=_UNLABELED) -> tuple:
        return tuple(labels.get(n, unlabeled) if s == sid else _OUTER for s, n in sink)

    def _finish(self, sid: int, labels: dict, shape) -> tuple:
        mask, sink, c = shape
        return (mask, self._vector(sid, labels, sink)), [e for e in sink if e[0] != sid], c

    def _greedy(self, sid: int, gset: set, shapes: list, labels: dict) -> dict:
        """Number the names of ``gset``; returns the name -> label map."""
        labels = dict(labels)
        occ: dict = defaultdict(list)
        for i, (_, sink, _) in enumerate(shapes):
            for s, n in sink:
                if s == sid and n not in labels:
                    occ[n].append(i)
        version = [0] * len(shapes)
        heap: list = []

        def push(i):
            mask, sink, _ = shapes[i]
            own = [n for s, n in sink if s == sid and n not in labels]
            if not own:
                return
            detached = len(own) == sum(s == sid for s, _ in sink)
            first: dict = {}
            pattern = tuple(first.setdefault(n, len(first)) for n in own)
            heapq.heappush(heap, (detached, mask, self._vector(sid, labels, sink), pattern, i, version[i]))

        for i in range(len(shapes)):
            push(i)
        remaining = len(gset) - len(labels)
        while remaining and heap:
            top = heapq.heappop(heap)
            while top[5] != version[top[4]]:
                top = heapq.heappop(heap)
            ties = [top]
            while heap and heap[0][:4] == top[:4]:
                e = heapq.heappop(heap)
                if e[5] == version[e[4]]:
                    ties.append(e)
            if len(ties) > 1 and self.budget[0] >= len(ties):
                self.budget[0] -= len(ties)
                best = None
                for e in ties:
                    trial = dict(labels)
                    _assign(trial, shapes[e[4]][1], sid)
                    out = self._greedy(sid, gset, shapes, trial)
                    score = sorted(self._finish(sid, out, s)[0] for s in shapes)
                    if best is None or score < best[0]:
                        best = (score, out)
                return best[1]
            for e in ties[1:]:
                heapq.heappush(heap, e)
            newly = _assign(labels, shapes[top[4]][1], sid)
            remaining -= len(newly)
            touched = {j for n in newly for j in occ[n]}
            for j in touched:
                version[j] += 1
                push(j)
        return labels


def _rep_depth(p: Process) -> int:
    inner = max((_rep_depth(c) for c in p.children()), default=0)
    return inner + 1 if isinstance(p, Rep) else inner


def _assign(labels: dict, sink: list, sid: int) -> list:
    newly = []
    for s, n in sink:
        if s == sid and n not in labels:
            labels[n] = len(labels)
            newly.append(n)
    return newly


def calculus_of(p: Process) -> str | None:
    """The calculus whose prefixes occur in ``p`` (None for prefix-free processes)."""
    group, comps = split(p)
    found: set = set()
    for c in comps:
        found |= c.tags
    if len(found) > 1:
        raise CalculusMismatch(f"process mixes calculi: {sorted(found)}")
    return next(iter(found), None)


@dataclass(frozen=True)
class CanonicalForm:
    calculus: str | None
    key: tuple
    process: Process

    @property
    def digest(self) -> str:
        return hashlib.sha256(repr(self.key).encode()).hexdigest()[:16]


def canonicalize(p: Process | CanonicalForm) -> CanonicalForm:
    if isinstance(p, CanonicalForm):
        return p
    n = normalize(p)
    tag = calculus_of(n)
    group, _ = split(n)
    key, comps = Keyer("canon")._canon(n)
    return CanonicalForm(tag, key, build_normal(group, comps))


def structural_key(p: Process) -> tuple:
    return canonicalize(p).key


def equiv(p: Process | CanonicalForm, q: Process | CanonicalForm) -> bool:
    """Structural congruence, decided by comparing canonical forms."""
    cp, cq = canonicalize(p), canonicalize(q)
    if cp.calculus and cq.calculus and cp.calculus != cq.calculus:
        raise CalculusMismatch(f"cannot compare {cp.calculus} with {cq.calculus}")
    return cp.key == cq.key


def alpha_equal(p: Process, q: Process) -> bool:
    return Keyer("alpha").process(p) == Keyer("alpha").process(q)
