"""Command line entry point: ``tmencode <command> <machine file> ...``.

Exit codes: 0 success, 1 faithfulness mismatch or stuck encoding,
2 parse or validation error, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .acpc import run_reductions
from .congruence import canonicalize
from .harness import CALCULI, candidates, check_faithful, emit_trace, engine
from .machine_file import MachineFileError, load_machine
from .tm import run

EXIT_OK, EXIT_MISMATCH, EXIT_INVALID, EXIT_INTERNAL = 0, 1, 2, 3


def _budget(text: str):
    try:
        parts = [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"budget must be N or L,R, got {text!r}") from None
    if len(parts) not in (1, 2) or min(parts) < 0:
        raise argparse.ArgumentTypeError(f"budget must be N or L,R with non-negative counts, got {text!r}")
    return parts[0] if len(parts) == 1 else tuple(parts)


def _nonneg(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("expected a non-negative integer")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tmencode", description="Turing Machine encodings into process calculi.")
    sub = p.add_subparsers(dest="command", required=True)

    def command(name, help_):
        c = sub.add_parser(name, help=help_)
        c.add_argument("file", help="machine description file")
        c.add_argument("--allow-nondet", action="store_true", help="accept nondeterministic machines")
        return c

    command("validate", "parse and validate a machine file")
    c = command("run", "run the machine itself")
    c.add_argument("--max-steps", type=_nonneg, required=True)
    c.add_argument("--json", action="store_true")
    c = command("encode", "print the encoded machine")
    c.add_argument("--calculus", choices=CALCULI, required=True)
    c.add_argument("--budget", type=_budget, default=0, help="π padding cells per side (N or L,R)")
    c = command("simulate", "reduce the encoding on its own")
    c.add_argument("--calculus", choices=CALCULI, required=True)
    c.add_argument("--max-reductions", type=_nonneg, required=True)
    c.add_argument("--budget", type=_budget, default=None)
    c.add_argument("--json", action="store_true")
    c = command("check", "lockstep faithfulness check")
    c.add_argument("--calculus", choices=CALCULI + ("all",), required=True)
    c.add_argument("--steps", type=_nonneg, required=True)
    c.add_argument("--budget", type=_budget, default=None)
    c.add_argument("--equiv-every", type=_nonneg, default=1, help="check congruence every N steps")
    c.add_argument("--json", action="store_true")
    c = command("trace", "emit a tm, encoded or lockstep trace")
    c.add_argument("--mode", choices=("tm", "encoded", "lockstep"), required=True)
    c.add_argument("--calculus", choices=CALCULI, default="acpc")
    c.add_argument("--steps", type=_nonneg, default=100)
    c.add_argument("--budget", type=_budget, default=None)
    c.add_argument("--json", action="store_true")
    return p


def _simulate(spec, args, out) -> int:
    eng = engine(args.calculus)
    budget = args.max_reductions if args.budget is None else args.budget
    pad = (budget, budget) if isinstance(budget, int) else budget
    start = eng.encode(spec, spec.config, pad)
    tr = run_reductions(start, args.max_reductions, step=lambda p: [s for s, _ in candidates(eng, p)])
    digests = [canonicalize(s).digest for s in tr.states]
    if args.json:
        print(json.dumps({"machine": spec.name, "calculus": args.calculus, "reductions": tr.reductions,
                          "stop": tr.stop, "digests": digests}, indent=2), file=out)
    else:
        for i, d in enumerate(digests):
            print(f"{i}: {d}", file=out)
        print(f"{tr.reductions} reductions, stop: {tr.stop}", file=out)
    return EXIT_MISMATCH if tr.stop == "ambiguous" else EXIT_OK


def _check(spec, args, out) -> int:
    names = CALCULI if args.calculus == "all" else (args.calculus,)
    reports = [check_faithful(spec, c, args.steps, budget=args.budget, equiv_every=args.equiv_every)
               for c in names]
    if args.json:
        data = [r.to_json() for r in reports]
        print(json.dumps(data[0] if len(data) == 1 else data, indent=2), file=out)
    else:
        print("\n".join(r.to_text() for r in reports), file=out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_MISMATCH


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        spec = load_machine(args.file, allow_nondet=args.allow_nondet)
    except MachineFileError as exc:
        for d in exc.diagnostics:
            print(f"{args.file}:{d}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"cannot read {args.file}: {exc.strerror}", file=sys.stderr)
        return EXIT_INVALID
    try:
        if args.command == "validate":
            m = spec.machine
            print(f"ok: {len(m.alphabet)} symbols, {len(m.states)} states, {len(m.rules)} rules", file=out)
            return EXIT_OK
        if args.command == "run":
            if args.json:
                print(emit_trace(spec, "tm", "json", steps=args.max_steps), file=out)
            else:
                tr = run(spec.machine, spec.config, args.max_steps)
                for i, c in enumerate(tr.configs):
                    print(f"{i}: {c}", file=out)
                print("halted" if tr.halted else f"not halted after {len(tr) - 1} steps", file=out)
            return EXIT_OK
        if args.command == "encode":
            print(engine(args.calculus).encode(spec, spec.config, _pair(args.budget)).pretty(), file=out)
            return EXIT_OK
        if args.command == "simulate":
            return _simulate(spec, args, out)
        if args.command == "check":
            return _check(spec, args, out)
        if args.command == "trace":
            fmt = "json" if args.json else "text"
            print(emit_trace(spec, args.mode, fmt, calculus=args.calculus, steps=args.steps,
                             budget=args.budget), file=out)
            return EXIT_OK
    except BrokenPipeError:
        # the reader went away (e.g. `| head`); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK
    except Exception as exc:  # any escape here is a bug in the workbench
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_INTERNAL


def _pair(budget):
    return (budget, budget) if isinstance(budget, int) else budget


if __name__ == "__main__":
    sys.exit(main())
