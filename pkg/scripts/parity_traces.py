"""Print the machine run and the per-calculus lockstep summary for the parity examples."""

from pathlib import Path

from tmencode.harness import CALCULI, check_faithful, emit_trace
from tmencode.machine_file import load_machine

MACHINES = Path(__file__).resolve().parent.parent / "machines"

for name in ("parity3", "parity2"):
    spec = load_machine(MACHINES / f"{name}.tm")
    print(f"== {name}")
    print(emit_trace(spec, "tm"))
    for c in CALCULI:
        rep = check_faithful(spec, c, 100)
        cands = " ".join("/".join(map(str, r.candidates)) for r in rep.records[1:])
        print(f"{c:<5} {rep.verdict} reductions={rep.reductions} candidates=[{cands}] "
              f"final={rep.final_candidates}")
