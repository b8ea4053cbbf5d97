"""Execute the goals of a script and collect their verdicts."""
from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from ..case_studies import RemoveConfig, fairness_demo, remove_space, verify_remove
from ..language import VariantSpec
from ..laws.catalogue import (
    CMD, FAMILY, REL, SET, LawInstance, check_law, exhaustive_instances, get_law,
    random_instance,
)
from ..laws.generators import DEFAULT_SEED, rng_for
from ..laws.sweeps import THEOREMS, sweep_theorem, sweep_verdict, theorem_depth
from ..laws.negative import hoare_loop_space, negative_control_hoare_loop
from ..laws.theorems import (
    RecursionRuleInstance, WhileRuleInstance, check_recursion_theorem, check_while_theorem,
    fact,
)
from ..refinement import equals, establishes, hoare_triple, refines
from ..semantics import Engine, satisfies_guarantee
from ..semantics.traces import ENV, I, Trace
from ..state_model import Int, stable, tolerates
from ..verdict import Outcome, Verdict
from .ast import Goal, Script
from .elaborate import Elaborator, domain_values, literal_value
from .lexer import ScriptError
from .parser import parse

CASE_DEPTHS = {"remove": 8, "fairness": 4, "hoare-loop": 5}
DEFAULT_SAMPLES = 50


@dataclass
class RunOptions:
    depth: int = 3
    engine: str | None = None  # overrides the default, not a goal's own choice
    seed: int = DEFAULT_SEED
    jobs: int = 1
    timings: bool = False
    laws: tuple = ()  # extra law sweeps appended after the script's goals


@dataclass
class GoalResult:
    id: str
    kind: str
    verdict: Verdict
    expect: str = "holds"
    space: object = field(default=None, repr=False)

    @property
    def expected(self) -> bool:
        want = Outcome.FAILS if self.expect == "fail" else Outcome.HOLDS
        return self.verdict.outcome is want


def resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    env = os.environ.get("RG_KERNEL_SEED")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ScriptError(f"RG_KERNEL_SEED must be an integer, got {env!r}") from None
    return DEFAULT_SEED


def goal_id(goal: Goal, index: int) -> str:
    return goal.label or f"g{index + 1}"


def law_goals(ids) -> list[Goal]:
    return [Goal("law", (law_id,), label=f"law:{law_id}") for law_id in ids]


class GoalRunner:
    def __init__(self, script: Script, options: RunOptions, source: str | None = None):
        self.script = script
        self.opts = options
        self.env = Elaborator(script, source)
        self.space = self.env.space
        self.goals = list(script.goals) + law_goals(options.laws)

    def settings(self, g: Goal) -> tuple[int, Engine]:
        depth = g.depth if g.depth is not None else CASE_DEPTHS.get(g.kind, self.opts.depth)
        engine = g.engine or self.opts.engine or "graph"
        return depth, Engine(engine)

    def check_all(self) -> None:
        """Elaborate every goal's arguments up front so name errors surface early."""
        for g in self.goals:
            self._bindings(g)
            if g.kind not in ("law", "remove", "fairness", "hoare-loop"):
                self._args(g)

    # -- argument elaboration -------------------------------------------------------

    def _args(self, g: Goal):
        e = self.env
        a = g.args
        if g.kind in ("refine", "equal"):
            return e.command(a[0]), e.command(a[1])
        if g.kind == "triple":
            return e.set_arg(a[0]), e.command(a[1]), e.set_arg(a[2])
        if g.kind == "establish":
            return (e.set_arg(a[0]), e.rel_arg(a[1]), e.expr(a[2]), literal_value(a[3]),
                    e.set_arg(a[4]))
        if g.kind == "stable":
            return e.set_arg(a[0]), e.rel_arg(a[1])
        if g.kind == "tolerates":
            return e.rel_arg(a[0]), e.rel_arg(a[1]), e.set_arg(a[2])
        if g.kind == "guarantee":
            return e.command(a[0]), e.rel_arg(a[1])
        return ()

    def _bindings(self, g: Goal) -> dict:
        e = self.env
        b = dict(g.bindings)
        if g.kind == "law":
            if g.args[0] in THEOREMS:
                return {}
            sorts = dict(get_law(g.args[0]).sorts)
            conv = {SET: e.set_arg, REL: e.rel_arg, CMD: e.command, FAMILY: e.family_arg}
            return {k: conv[sorts[k]](v) for k, v in b.items()}
        if g.kind == "while-rule":
            need = ("b", "c", "r", "q", "p", "pt", "pf", "px", "variant")
            self._require(g, b, need)
            return {
                "b": e.expr(b["b"]), "c": e.command(b["c"]), "r": e.rel_arg(b["r"]),
                "q": e.rel_arg(b["q"]), "p": e.set_arg(b["p"]), "pt": e.set_arg(b["pt"]),
                "pf": e.set_arg(b["pf"]), "px": e.set_arg(b["px"]),
                "variant": self._variant(g, e.expr(b["variant"]), b.get("order", "lt")),
            }
        if g.kind == "recursion-rule":
            self._require(g, b, ("binder", "body", "s", "px", "variant"))
            x = b["binder"]
            return {
                "binder": x, "body": e.command(b["body"], frozenset({x})),
                "s": e.command(b["s"]), "px": e.set_arg(b["px"]),
                "variant": self._variant(g, e.expr(b["variant"]), b.get("order", "lt")),
            }
        if g.kind in ("remove", "fairness"):
            uni = (0, 1)
            if "universe" in b:
                vals = domain_values(b["universe"])
                if not all(isinstance(v, Int) for v in vals):
                    raise ScriptError("remove universe must hold integers", *g.pos)
                uni = tuple(v.value for v in vals)
            kw = {"universe": uni, "i": b.get("element", max(uni))}
            if "rely" in b:
                kw["rely_mode"] = b["rely"]
            if "guarantee" in b:
                kw["guarantee_mode"] = "identity" if b["guarantee"] == "id" else b["guarantee"]
            try:
                RemoveConfig(**kw)
            except ValueError as exc:
                raise ScriptError(str(exc), *g.pos) from None
            return kw
        if g.kind == "hoare-loop":
            mode = b.get("rely", "univ")
            mode = "identity" if mode == "id" else mode
            if mode not in ("univ", "identity"):
                raise ScriptError(f"hoare-loop rely must be univ or identity, not {mode!r}",
                                  *g.pos)
            return {"rely": mode}
        return b

    @staticmethod
    def _require(g, b, names):
        missing = [n for n in names if n not in b]
        if missing:
            raise ScriptError(f"{g.kind} needs bindings: {', '.join(missing)}", *g.pos)

    def _variant(self, g, expr, order):
        try:
            if order == "lt":
                return VariantSpec.less_than(self.space, expr)
            if order == "subset":
                return VariantSpec.subset_order(self.space, expr)
        except (ValueError, AttributeError) as exc:
            raise ScriptError(f"bad variant: {exc}", *g.pos) from None
        raise ScriptError(f"variant order must be lt or subset, not {order!r}", *g.pos)

    # -- execution --------------------------------------------------------------------

    def run_goal(self, index: int) -> GoalResult:
        g = self.goals[index]
        depth, kind = self.settings(g)
        t0 = time.perf_counter()
        sp = space = self.space
        b = self._bindings(g)
        if g.kind == "refine":
            v = refines(sp, *self._args(g), depth, kind)
        elif g.kind == "equal":
            v = equals(sp, *self._args(g), depth, kind)
        elif g.kind == "triple":
            v = hoare_triple(sp, *self._args(g), depth, kind)
        elif g.kind == "establish":
            v = establishes(sp, *self._args(g), depth, kind)
        elif g.kind == "stable":
            p, r = self._args(g)
            v = fact(stable(p, r), depth, kind)
            bad = sorted((a, c) for a, c in r if a in p and c not in p)
            if bad:
                v.counterexample = Trace(bad[0][0], ((ENV, bad[0][1]),), I)
        elif g.kind == "tolerates":
            v = fact(tolerates(*self._args(g)), depth, kind)
        elif g.kind == "guarantee":
            v = satisfies_guarantee(sp, *self._args(g), depth, kind)
        elif g.kind == "law" and g.args[0] in THEOREMS:
            count = g.samples if g.samples is not None else DEFAULT_SAMPLES
            depth = g.depth if g.depth is not None else theorem_depth(g.args[0])
            res = sweep_theorem(g.args[0], count, self.opts.seed, depth, kind)
            v = sweep_verdict(res, depth, kind, t0)
            if res.alarms:
                space = res.alarms[0][0]
        elif g.kind == "law":
            v = self._law(g, index, b, depth, kind)
        elif g.kind == "while-rule":
            inst = WhileRuleInstance(b["b"], b["c"], b["r"], b["q"], b["p"], b["pt"], b["pf"],
                                     b["px"], b["variant"], depth)
            v = check_while_theorem(sp, inst, kind)
        elif g.kind == "recursion-rule":
            inst = RecursionRuleInstance(b["binder"], b["body"], b["s"], b["px"], b["variant"],
                                         depth)
            v = check_recursion_theorem(sp, inst, kind)
        elif g.kind == "remove":
            rep = verify_remove(RemoveConfig(depth=depth, engine=kind, **b))
            space = rep.space
            v = _report_verdict(rep, depth, kind)
        elif g.kind == "fairness":
            rep = fairness_demo(RemoveConfig(depth=depth, engine=kind, **b))
            v = _report_verdict(rep, depth, kind)
        elif g.kind == "hoare-loop":
            space = hoare_loop_space()
            v = negative_control_hoare_loop(b["rely"], depth, kind)
        else:
            raise ScriptError(f"unknown goal kind {g.kind!r}", *g.pos)
        v.elapsed = time.perf_counter() - t0
        return GoalResult(goal_id(g, index), g.kind, v, g.expect, space)

    def _law(self, g, index, fixed, depth, kind) -> Verdict:
        law = get_law(g.args[0])
        names = [n for n, _ in law.sorts]
        if all(n in fixed for n in names):
            return check_law(self.space, LawInstance(law.id, fixed, depth, self.space), kind)
        if not fixed and self.space.size <= 2:
            instances = exhaustive_instances(self.space, law.id, depth)
        else:
            rng = rng_for(self.opts.seed, "law", index, law.id)
            count = g.samples if g.samples is not None else DEFAULT_SAMPLES
            instances = []
            for _ in range(count):
                inst = random_instance(self.space, law.id, rng, depth)
                inst.bindings.update(fixed)
                instances.append(inst)
        checked = vacuous = 0
        worst = None
        for inst in instances:
            v = check_law(self.space, inst, kind)
            checked += 1
            vacuous += v.detail.startswith("vacuous")
            if v.outcome is Outcome.FAILS:
                return v
            if v.outcome is not Outcome.HOLDS and worst is None:
                worst = v
        if worst is not None:
            return worst
        return Verdict(Outcome.HOLDS, depth, kind,
                       detail=f"{checked} instances, {vacuous} vacuous")


def _report_verdict(rep, depth, kind) -> Verdict:
    if hasattr(rep, "failing"):
        parts = dict(rep.obligations)
        parts["guarantee"] = rep.guarantee
        parts["refinement"] = rep.refinement
        bad = rep.failing()
    else:
        parts = dict(rep.checks)
        bad = [k for k, v in parts.items() if not v.holds]
    if not bad:
        return Verdict(Outcome.HOLDS, depth, kind, obligations=parts)
    cexs = [parts[k].counterexample for k in bad
            if k in parts and parts[k].counterexample is not None]
    return Verdict(Outcome.FAILS, depth, kind, cexs[0] if cexs else None,
                   detail=f"{len(bad)} of {len(parts) + hasattr(rep, 'witness')} checks fail",
                   obligations=parts)


def _run_one(text: str, options: RunOptions, index: int) -> GoalResult:
    runner = GoalRunner(parse(text), options, text)
    res = runner.run_goal(index)
    res.space = None  # spaces are rebuilt by the parent for rendering
    return res


def run(script: Script | str, options: RunOptions | None = None) -> list[GoalResult]:
    """Run every goal; results come back in declaration order."""
    options = options or RunOptions()
    text = script if isinstance(script, str) else None
    tree = parse(text) if text is not None else script
    runner = GoalRunner(tree, options, text)
    runner.check_all()
    n = len(runner.goals)
    if options.jobs <= 1 or n <= 1 or text is None:
        return [runner.run_goal(i) for i in range(n)]
    with ProcessPoolExecutor(max_workers=options.jobs) as pool:
        results = list(pool.map(_run_one, [text] * n, [options] * n, range(n)))
    for i, res in enumerate(results):
        res.space = _space_for(runner, runner.goals[i])
    return results


def _space_for(runner: GoalRunner, g: Goal):
    if g.kind == "hoare-loop":
        return hoare_loop_space()
    if g.kind == "remove":
        return remove_space(RemoveConfig(**runner._bindings(g)))
    return runner.space


__all__ = ["GoalResult", "GoalRunner", "RunOptions", "resolve_seed", "run"]