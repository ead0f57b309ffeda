"""Lockstep-check random machines in every calculus and print a summary table.

    python3 scripts/random_lockstep.py --machines 200 --steps 25 --seed 1
"""

import argparse
import random
import time
from collections import Counter
from dataclasses import replace

from tmencode.harness import CALCULI, check_faithful
from tmencode.machine_file import MachineSpec
from tmencode.sampling import random_config, random_machine


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--machines", type=int, default=200)
    ap.add_argument("--steps", type=int, default=25)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--window", type=int, default=6, help="longest initial tape window")
    args = ap.parse_args()

    rng = random.Random(args.seed)
    verdicts = {c: Counter() for c in CALCULI}
    seconds = Counter()
    for i in range(args.machines):
        m = random_machine(rng)
        cfg = random_config(rng, m, args.window)
        t = cfg.tape
        spec = MachineSpec(replace(m, start=cfg.state), (*reversed(t.left), t.head, *t.right), len(t.left),
                           name=f"random{i}")
        for c in CALCULI:
            start = time.perf_counter()
            rep = check_faithful(spec, c, args.steps)
            seconds[c] += time.perf_counter() - start
            verdicts[c][rep.verdict] += 1
            if rep.verdict != "PASS":
                print(f"{spec.name} {c}: {rep.verdict} {rep.message}")
    print(f"{'calculus':<8} {'PASS':>6} {'FAIL':>6} {'STUCK':>6} {'seconds':>8}")
    for c in CALCULI:
        v = verdicts[c]
        print(f"{c:<8} {v['PASS']:>6} {v['FAIL']:>6} {v['STUCK']:>6} {seconds[c]:>8.2f}")


if __name__ == "__main__":
    main()
