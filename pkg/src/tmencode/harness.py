"""Lockstep faithfulness checking of every encoding against the machine itself."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

from . import acpc, cpc, pi, psi
from .congruence import canonicalize
from .encoding import DecodeError, decode_config, encode_machine, transition_outputs
from .machine_file import MachineSpec
from .process import Process, Redex
from .tm import Configuration, run, successors

CALCULI = ("acpc", "cpc", "psi", "pi")


@dataclass(frozen=True)
class Engine:
    name: str
    per_step: int
    encode: Callable[[MachineSpec, Configuration, tuple[int, int]], Process]
    redexes: Callable[[Process], list[Redex]]


ENGINES = {
    "acpc": Engine("acpc", 1, lambda s, c, pad: encode_machine(s.machine, c, s.reserved),
                   acpc.redex_list),
    "cpc": Engine("cpc", 1, lambda s, c, pad: cpc.encode_machine_cpc(s.machine, c, s.reserved),
                  cpc.redex_list),
    "psi": Engine("psi", 1, lambda s, c, pad: psi.encode_machine_psi(s.machine, c, s.reserved),
                  psi.redex_list),
    "pi": Engine("pi", 2, lambda s, c, pad: pi.encode_machine_pi(s.machine, c, pad, s.reserved),
                 pi.redex_list),
}


def engine(name: str) -> Engine:
    try:
        return ENGINES[name]
    except KeyError:
        raise ValueError(f"unknown calculus {name!r}; choose from {', '.join(CALCULI)}") from None


def candidates(eng: Engine, p: Process) -> list[tuple[Process, Redex]]:
    """Successors of ``p`` with their redexes, congruent duplicates removed."""
    rs = eng.redexes(p)
    if len(rs) <= 1:
        return [(r.successor, r) for r in rs]
    seen, out = set(), []
    for r in rs:
        cf = canonicalize(r.successor)
        if cf.key not in seen:
            seen.add(cf.key)
            out.append((cf.process, r))
    return out


@dataclass(frozen=True)
class StepRecord:
    index: int
    config: Configuration
    reductions: int
    candidates: tuple[int, ...]
    equiv: bool | None
    digest: str | None
    checks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.equiv is not False and all(self.checks.values())

    def to_json(self) -> dict:
        t = self.config.tape
        return {
            "index": self.index, "state": self.config.state, "left": list(t.left),
            "head": t.head, "right": list(t.right), "reductions": self.reductions,
            "equiv": self.equiv, "candidates": list(self.candidates), "digest": self.digest,
            "checks": dict(self.checks),
        }


@dataclass(frozen=True)
class FaithfulnessReport:
    machine: str
    calculus: str
    steps_requested: int
    records: tuple[StepRecord, ...]
    verdict: str  # PASS, FAIL or STUCK
    halted: bool
    diverged: bool
    final_candidates: int | None
    message: str | None = None

    @property
    def steps_performed(self) -> int:
        return len(self.records) - 1

    @property
    def reductions(self) -> int:
        return sum(r.reductions for r in self.records)

    @property
    def passed(self) -> bool:
        return self.verdict == "PASS"

    def to_json(self) -> dict:
        return {
            "machine": self.machine, "calculus": self.calculus,
            "steps": [r.to_json() for r in self.records], "reductions": self.reductions,
            "verdict": self.verdict, "halted": self.halted, "diverged": self.diverged,
            "final_candidates": self.final_candidates, "message": self.message,
        }

    def to_text(self) -> str:
        end = "halted" if self.halted else ("diverged" if self.diverged else "stopped")
        lines = [f"check {self.machine} ({self.calculus}): {self.verdict}, "
                 f"{self.steps_performed} steps, {self.reductions} reductions, {end}"]
        for r in self.records:
            eq = {True: "yes", False: "NO", None: "-"}[r.equiv]
            extra = "".join(f" {k}={'ok' if v else 'FAIL'}" for k, v in r.checks.items())
            lines.append(f"  step {r.index}: {r.config}  reductions={r.reductions} "
                         f"candidates={','.join(map(str, r.candidates)) or '-'} equiv={eq}{extra}")
        if self.final_candidates is not None:
            lines.append(f"  final candidates: {self.final_candidates}")
        if self.message:
            lines.append(f"  {self.message}")
        return "\n".join(lines)


def _growth(cfg: Configuration, nxt: Configuration) -> tuple[int, int]:
    """Blank cells materialised on the (left, right) side by the step cfg -> nxt."""
    before = len(cfg.tape.left) + len(cfg.tape.right)
    if len(nxt.tape.left) + len(nxt.tape.right) <= before:
        return 0, 0
    return (1, 0) if not nxt.tape.left else (0, 1)


def _discipline(calculus: str, path: list[Redex], all_redexes: list[list[Redex]]) -> dict:
    if calculus == "pi":
        ok = len(path) == 2 and pi.is_head_output(path[0].first) and (
            isinstance(path[1].first, pi.PiOut) and not pi.is_head_output(path[1].first)
            and isinstance(path[1].second, pi.PiIn))
        return {"phase": ok}
    if calculus == "cpc":
        clash = any(r.first.output_shaped and r.second.output_shaped for rs in all_redexes for r in rs)
        return {"no_output_pairs": not clash}
    return {}


def _diagnose(spec: MachineSpec, calculus: str, proc: Process, expected: Configuration) -> str:
    if calculus != "acpc":
        return f"expected {expected}; encoding reached {canonicalize(proc).process.pretty()[:400]}"
    outs = transition_outputs(canonicalize(proc).process)
    if len(outs) != 1:
        return f"expected {expected}; encoding has {len(outs)} top-level outputs"
    try:
        got = decode_config(outs[0], spec.machine, spec.reserved)
    except DecodeError as exc:
        return f"expected {expected}; encoding does not decode: {exc}"
    return f"expected {expected}; encoding decodes to {got}"


def check_faithful(spec: MachineSpec, calculus: str, steps: int, *, budget=None,
                   equiv_every: int = 1) -> FaithfulnessReport:
    """Run the machine and the encoding in lockstep for up to ``steps`` steps.

    At each step the encoding must have exactly as many candidate reductions
    as the machine has successors, and the reached process must be congruent
    to the fresh encoding of the successor configuration.  ``equiv_every``
    thins the congruence checks on long runs (the last step is always
    checked); candidate counts are checked at every reduction regardless.
    """
    if steps < 0:
        raise ValueError("steps must be non-negative")
    eng = engine(calculus)
    m = spec.machine
    budget = steps if budget is None else budget
    bl, br = (budget, budget) if isinstance(budget, int) else budget
    gl = gr = 0
    cfg = spec.config
    proc = eng.encode(spec, cfg, (bl, br))
    shadow = encode_machine(m, cfg, spec.reserved) if calculus == "psi" else None
    records = [StepRecord(0, cfg, 0, (), True, canonicalize(proc).digest)]

    def report(verdict, halted=False, diverged=False, final=None, message=None):
        if verdict == "PASS" and not all(r.ok for r in records):
            verdict = "FAIL"
        return FaithfulnessReport(spec.name, calculus, steps, tuple(records), verdict,
                                  halted, diverged, final, message)

    for i in range(1, steps + 1):
        nexts = successors(m, cfg)
        if not nexts:
            final = len(eng.redexes(proc))
            if final:
                return report("FAIL", True, False, final, f"encoding still reduces after halting at {cfg}")
            return report("PASS", True, False, 0)
        frontier = [(proc, [])]
        counts, seen = [], []
        for phase in range(eng.per_step):
            nxt, total = [], 0
            for p, path in frontier:
                cands = candidates(eng, p)
                seen.append([r for _, r in cands])
                total += len(cands)
                nxt.extend((s, path + [r]) for s, r in cands)
            counts.append(total)
            frontier = nxt
            if total != len(nexts):
                kind = "STUCK" if total < len(nexts) else "FAIL"
                records.append(StepRecord(i, nexts[0], phase, tuple(counts), None, None))
                what = "no reduction" if total == 0 else f"{total} candidates for {len(nexts)} successors"
                return report(kind, message=f"step {i}, reduction {phase + 1}: {what}")
        target = nexts[0]
        dl, dr = _growth(cfg, target)
        check = equiv_every > 0 and (i % equiv_every == 0 or i == steps) or len(nexts) > 1
        eq, digest, chosen = None, None, frontier[0]
        if check:
            pads = {}
            for succ in nexts:
                sl, sr = _growth(cfg, succ)
                ref = canonicalize(eng.encode(spec, succ, (bl - gl - sl, br - gr - sr)))
                pads[ref.key] = succ
            keyed = [(canonicalize(p), (p, path)) for p, path in frontier]
            found = {cf.key for cf, _ in keyed}
            eq = found == set(pads)
            for cf, item in keyed:
                if pads.get(cf.key) == target:
                    chosen, digest = item, cf.digest
                    break
            else:
                digest = keyed[0][0].digest
        proc, path = chosen
        checks = _discipline(calculus, path, seen)
        if shadow is not None:
            shadow = candidates(ENGINES["acpc"], shadow)[0][0]
            checks["isomorphic"] = not check or canonicalize(psi.from_acpc(shadow)).key == canonicalize(proc).key
        records.append(StepRecord(i, target, eng.per_step, tuple(counts), eq, digest, checks))
        if eq is False:
            return report("FAIL", message=f"step {i}: {_diagnose(spec, calculus, proc, target)}")
        gl, gr, cfg = gl + dl, gr + dr, target
    halted = not successors(m, cfg)
    final = len(eng.redexes(proc))
    if halted and final:
        return report("FAIL", True, False, final, f"encoding still reduces after halting at {cfg}")
    return report("PASS", halted, not halted and final > 0, final)


def check_all(spec: MachineSpec, steps: int, **kw) -> dict[str, FaithfulnessReport]:
    return {c: check_faithful(spec, c, steps, **kw) for c in CALCULI}


def _config_json(i: int, c: Configuration) -> dict:
    t = c.tape
    return {"index": i, "state": c.state, "left": list(t.left), "head": t.head, "right": list(t.right)}


def emit_trace(spec: MachineSpec, mode: str, fmt: str = "text", *, calculus: str = "acpc",
               steps: int = 100, budget=None) -> str:
    """Render a ``tm``, ``encoded`` or ``lockstep`` trace as text or JSON."""
    if fmt not in ("text", "json"):
        raise ValueError(f"unknown format {fmt!r}")
    if mode == "tm":
        tr = run(spec.machine, spec.config, steps)
        if fmt == "json":
            return json.dumps({"machine": spec.name, "steps": [_config_json(i, c) for i, c in enumerate(tr.configs)],
                               "halted": tr.halted}, indent=2)
        return "\n".join([f"{i}: {c}" for i, c in enumerate(tr.configs)] + ["halted" if tr.halted else "running"])
    if mode == "encoded":
        eng = engine(calculus)
        b = steps if budget is None else budget
        start = eng.encode(spec, spec.config, (b, b) if isinstance(b, int) else b)
        tr = acpc.run_reductions(start, steps * eng.per_step,
                                 step=lambda p: [s for s, _ in candidates(eng, p)])
        states = [canonicalize(p) for p in tr.states]
        if fmt == "json":
            return json.dumps({"machine": spec.name, "calculus": calculus, "stop": tr.stop,
                               "steps": [{"index": i, "digest": cf.digest,
                                          "process": (p if i == 0 else cf.process).pretty()}
                                         for i, (p, cf) in enumerate(zip(tr.states, states))]}, indent=2)
        shown = [tr.states[0].pretty()] + [cf.process.pretty() for cf in states[1:]]
        return "\n".join([f"{i}: {s}" for i, s in enumerate(shown)] + [f"stop: {tr.stop}"])
    if mode == "lockstep":
        rep = check_faithful(spec, calculus, steps, budget=budget)
        return json.dumps(rep.to_json(), indent=2) if fmt == "json" else rep.to_text()
    raise ValueError(f"unknown mode {mode!r}")

