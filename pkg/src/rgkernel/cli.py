"""Command-line entry point.

Exit codes: 0 when every goal has its expected verdict, 1 otherwise, 2 for
usage, parse and elaboration errors.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .laws.catalogue import LAWS, exhaustive_instances, random_instance, sweep_law
from .laws.generators import rng_for
from .laws.sweeps import THEOREMS, sweep_theorem
from .dsl import RunOptions, ScriptError, render, resolve_seed, run
from .semantics import Engine
from .state_model import StateSpace


def _law_ids(spec: str | None) -> tuple:
    if not spec:
        return ()
    if spec == "all":
        return tuple(LAWS) + tuple(THEOREMS)
    ids = tuple(s.strip() for s in spec.split(",") if s.strip())
    unknown = [i for i in ids if i not in LAWS and i not in THEOREMS]
    if unknown:
        raise ScriptError(f"unknown law ids: {', '.join(unknown)}")
    return ids


def cmd_check(args) -> int:
    try:
        text = Path(args.file).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        seed = resolve_seed(args.seed)
        opts = RunOptions(depth=args.depth, engine=args.engine, seed=seed, jobs=args.jobs,
                          timings=args.timings, laws=_law_ids(args.laws))
        results = run(text, opts)
    except ScriptError as exc:
        print(f"{args.file}:{exc}", file=sys.stderr)
        return 2
    sys.stdout.write(render(results, args.format, seed, args.timings))
    if args.json:
        doc = render(results, "json", seed, args.timings)
        if args.json == "-":
            sys.stdout.write(doc)
        else:
            Path(args.json).write_text(doc, encoding="utf-8")
    return 0 if all(r.expected for r in results) else 1


def cmd_laws(args) -> int:
    try:
        ids = _law_ids(args.ids or "all")
        seed = resolve_seed(args.seed)
    except ScriptError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    kind = Engine(args.engine)
    small = StateSpace.of(x=[0, 1])
    large = StateSpace.of(x=[0, 1, 2])
    failed = 0
    for law_id in ids:
        if law_id in THEOREMS:
            res = sweep_theorem(law_id, args.samples, seed, engine=kind)
            failed += not res.ok
            counts = ", ".join(f"{n} {o}" for o, n in sorted(res.outcomes.items(),
                                                              key=lambda kv: kv[0].value))
            print(f"{'PASS' if res.ok else 'FAIL'} {law_id}: {res.checked} instances ({counts})")
            for _, inst, v in res.alarms[:3]:
                print(f"    {v.detail}: {inst!r}")
            continue
        ex = sweep_law(small, law_id, exhaustive_instances(small, law_id, args.depth), kind)
        rng = rng_for(seed, "laws", law_id)
        rnd = sweep_law(large, law_id,
                        (random_instance(large, law_id, rng, args.depth)
                         for _ in range(args.samples)), kind)
        ok = ex.ok and rnd.ok
        failed += not ok
        print(f"{'PASS' if ok else 'FAIL'} {law_id}: {ex.checked} exhaustive "
              f"({ex.vacuous} vacuous), {rnd.checked} random ({rnd.vacuous} vacuous)")
        for inst, v in (ex.failures + rnd.failures)[:3]:
            print(f"    {inst.describe()}: {v.detail}")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rgkernel",
                                 description="Bounded trace checker for rely/guarantee programs.")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="run the goals of a script")
    c.add_argument("file")
    c.add_argument("--depth", type=int, default=3, help="default depth for goals without one")
    c.add_argument("--engine", choices=[e.value for e in Engine], default=None)
    c.add_argument("--laws", default=None, help="'all' or comma-separated law ids to sweep too")
    c.add_argument("--json", default=None, metavar="OUT", help="also write a json report")
    c.add_argument("--format", choices=("human", "json"), default="human")
    c.add_argument("--seed", type=int, default=None,
                   help="random seed (falls back to RG_KERNEL_SEED)")
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--timings", action="store_true", help="include elapsed times")
    c.set_defaults(func=cmd_check)

    law = sub.add_parser("laws", help="sweep the law catalogue")
    law.add_argument("--ids", default=None, help="comma-separated law ids (default all)")
    law.add_argument("--depth", type=int, default=4)
    law.add_argument("--samples", type=int, default=200)
    law.add_argument("--seed", type=int, default=None)
    law.add_argument("--engine", choices=[e.value for e in Engine], default="graph")
    law.set_defaults(func=cmd_laws)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    if getattr(args, "depth", 0) < 0 or getattr(args, "jobs", 1) < 1:
        print("error: depth must be >= 0 and jobs >= 1", file=sys.stderr)
        return 2
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
