"""Premise-checking verifiers for the expression, conditional, recursion and
while-loop rules.

Each checker evaluates every premise and the conclusion independently at
the instance's depth:

* some premise fails           -> PREMISE_VIOLATION
* premises hold, conclusion ok -> HOLDS
* premises hold, conclusion no -> SOUNDNESS_ALARM (the rule would be unsound)

All verdicts land in ``Verdict.obligations`` keyed by premise name.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

from ..language import (
    TOP, Command, Conj, Nu, Seq, VariantSpec, apply_binary, apply_unary, assert_,
    conditional, eval_lvexpr, expr_values, post_spec, rely, substitute, while_loop,
)
from ..refinement import establishes, hoare_triple, refines
from ..semantics import Engine
from ..state_model import (
    BOOLEANS, FALSE, TRUE, Base, LValue, StateRel, StateSet, StateSpace, Value,
    range_restrict, refl_trans_closure, stable, tolerates,
)
from ..verdict import Outcome, Verdict

RULES = ("const", "var", "deref", "unary", "binary", "array")


def _kind(engine) -> Engine:
    return engine if isinstance(engine, Engine) else Engine(str(engine).lower())


def fact(ok: bool, depth: int, engine: Engine, detail: str = "") -> Verdict:
    """A side condition decided outside the trace semantics."""
    return Verdict(Outcome.HOLDS if ok else Outcome.FAILS, depth, engine, detail=detail)


def judge(premises: dict, conclusion: Verdict, depth: int, engine: Engine,
          t0: float) -> Verdict:
    obligations = dict(premises)
    obligations["conclusion"] = conclusion
    elapsed = time.perf_counter() - t0
    pending = [n for n, v in premises.items() if v.outcome is Outcome.INCONCLUSIVE]
    if pending or conclusion.outcome is Outcome.INCONCLUSIVE:
        return Verdict(Outcome.INCONCLUSIVE, depth, engine, elapsed=elapsed,
                       detail=f"inconclusive: {', '.join(pending) or 'conclusion'}",
                       obligations=obligations)
    broken = [n for n, v in premises.items() if not v.holds]
    if broken:
        return Verdict(Outcome.PREMISE_VIOLATION, depth, engine,
                       premises[broken[0]].counterexample, elapsed,
                       detail=f"premise {broken[0]} fails", obligations=obligations)
    if not conclusion.holds:
        return Verdict(Outcome.SOUNDNESS_ALARM, depth, engine, conclusion.counterexample,
                       elapsed, detail="premises hold but conclusion fails",
                       obligations=obligations)
    return Verdict(Outcome.HOLDS, depth, engine, elapsed=elapsed, obligations=obligations)


def establishes_lv(space: StateSpace, p: StateSet, r: StateRel, lve, lv: LValue,
                   post: StateSet, depth: int, engine=Engine.GRAPH) -> Verdict:
    """L-value evaluation of ``lve`` to ``lv`` under ``r`` from ``p`` ends in ``post``."""
    return hoare_triple(space, p, Conj(rely(space, r), eval_lvexpr(space, lve, lv)), post,
                        depth, engine)


def bool_set(space: StateSpace, k: Value) -> StateSet:
    """The state set ``{k ∈ 𝔹}``: everything when ``k`` is boolean, else nothing."""
    return space.all if k in BOOLEANS else frozenset()


# -- expressions -------------------------------------------------------------


@dataclass
class ExpressionRuleInstance:
    """Bindings for one expression rule.

    ``target`` is the value (or l-value for ``var``/``array``) the conclusion
    evaluates to; ``post`` is the conclusion's postcondition; ``sub1``/``sub2``
    map sub-evaluation results to their postconditions.
    """

    rule: str
    p: StateSet
    r: StateRel
    expr: object
    target: object
    post: StateSet
    sub1: dict = field(default_factory=dict)
    sub2: dict = field(default_factory=dict)
    depth: int = 3


def check_expression_rule(space: StateSpace, inst: ExpressionRuleInstance,
                          engine=Engine.GRAPH) -> Verdict:
    kind = _kind(engine)
    n = inst.depth
    t0 = time.perf_counter()
    p, r, e, k, post = inst.p, inst.r, inst.expr, inst.target, inst.post
    prem: dict[str, Verdict] = {"p-stable": fact(stable(p, r), n, kind, "p stable under r")}

    def est(expr, val, q):
        return establishes(space, p, r, expr, val, q, n, kind)

    def est_lv(lve, lv, q):
        return establishes_lv(space, p, r, lve, lv, q, n, kind)

    if inst.rule == "const":
        expected = p if e.value == k else frozenset()
        prem["post-shape"] = fact(post == expected, n, kind, "post is p restricted to the constant")
        concl = est(e, k, post)
    elif inst.rule == "var":
        expected = p if k == Base(e.name) else frozenset()
        prem["post-shape"] = fact(post == expected, n, kind, "post is p restricted to the variable")
        concl = est_lv(e, k, post)
    elif inst.rule == "deref":
        prem["post-stable"] = fact(stable(post, r), n, kind, "post stable under r")
        for lv in space.lvalues:
            q1 = inst.sub1.get(lv, frozenset())
            prem[f"lve->{lv}"] = est_lv(e.lve, lv, q1)
            slot = space.slot(lv)
            sel = frozenset(i for i in q1 if space.states[i][slot] == k)
            prem[f"incl {lv}"] = fact(sel <= post, n, kind)
        concl = est(e, k, post)
    elif inst.rule == "unary":
        for k1 in expr_values(space, e.operand):
            if apply_unary(e.op, k1) != k:
                continue
            q1 = inst.sub1.get(k1, frozenset())
            prem[f"e1->{k1}"] = est(e.operand, k1, q1)
            prem[f"incl {k1}"] = fact(q1 <= post, n, kind)
        concl = est(e, k, post)
    elif inst.rule == "binary":
        for k1 in expr_values(space, e.left):
            for k2 in expr_values(space, e.right):
                if apply_binary(e.op, k1, k2) != k:
                    continue
                q1 = inst.sub1.get(k1, frozenset())
                q2 = inst.sub2.get(k2, frozenset())
                prem.setdefault(f"e1->{k1}", est(e.left, k1, q1))
                prem.setdefault(f"e2->{k2}", est(e.right, k2, q2))
                prem[f"incl {k1},{k2}"] = fact(q1 & q2 <= post, n, kind)
        concl = est(e, k, post)
    elif inst.rule == "array":
        arr, idx = k.array, k.index
        q1 = inst.sub1.get(arr, frozenset())
        q2 = inst.sub2.get(idx, frozenset())
        prem[f"lve->{arr}"] = est_lv(e.array, arr, q1)
        prem[f"index->{idx}"] = est(e.index, idx, q2)
        prem["incl"] = fact(q1 & q2 <= post, n, kind)
        concl = est_lv(e, k, post)
    else:
        raise ValueError(f"unknown expression rule {inst.rule!r}")
    return judge(prem, concl, n, kind, t0)


# -- conditional ---------------------------------------------------------------


@dataclass
class ConditionalRuleInstance:
    b: object
    q: StateRel
    r: StateRel
    p: StateSet
    p_t: StateSet
    p_f: StateSet
    depth: int = 3


def guard_premises(space, p, r, b, p_t, p_f, depth, kind, prefix="cond") -> dict:
    prem = {
        f"{prefix}-true": establishes(space, p, r, b, TRUE, p_t, depth, kind),
        f"{prefix}-false": establishes(space, p, r, b, FALSE, p_f, depth, kind),
    }
    for k in expr_values(space, b):
        prem[f"{prefix}-bool {k}"] = establishes(space, p, r, b, k, bool_set(space, k), depth, kind)
    return prem


def check_conditional_theorem(space: StateSpace, inst: ConditionalRuleInstance,
                              engine=Engine.GRAPH) -> Verdict:
    kind = _kind(engine)
    n = inst.depth
    t0 = time.perf_counter()
    prem = {"tolerates": fact(tolerates(inst.q, inst.r, inst.p), n, kind)}
    prem.update(guard_premises(space, inst.p, inst.r, inst.b, inst.p_t, inst.p_f, n, kind))
    rl = rely(space, inst.r)
    spec = post_spec(space, inst.q)

    def branch(pre):
        return Conj(rl, Seq(assert_(space, pre), spec))

    lhs = branch(inst.p)
    rhs = conditional(space, inst.b, branch(inst.p_t), branch(inst.p_f))
    return judge(prem, refines(space, lhs, rhs, n, kind), n, kind, t0)


# -- recursion ----------------------------------------------------------------


@dataclass
class RecursionRuleInstance:
    """``body`` is the function ``f`` with its argument as ``Var(binder)``."""

    binder: str
    body: Command
    s: Command
    p_x: StateSet
    variant: VariantSpec
    depth: int = 4

    def apply(self, arg: Command) -> Command:
        return substitute(self.body, self.binder, arg)


def check_recursion_theorem(space: StateSpace, inst: RecursionRuleInstance,
                            engine=Engine.GRAPH) -> Verdict:
    kind = _kind(engine)
    n = inst.depth
    t0 = time.perf_counter()
    z = inst.variant
    prem = {
        "well-founded": fact(z.well_founded(), n, kind),
        "early-exit": refines(space, Seq(assert_(space, inst.p_x), inst.s), inst.apply(TOP), n, kind),
    }
    for k in z.carrier:
        below = z.lt_set(space, k) | inst.p_x
        prem[f"step {k}"] = refines(
            space,
            Seq(assert_(space, z.eq_set(space, k)), inst.s),
            inst.apply(Seq(assert_(space, below), inst.s)),
            n, kind,
        )
    concl = refines(space, inst.s, Nu(inst.binder, inst.body), n, kind)
    return judge(prem, concl, n, kind, t0)


# -- while --------------------------------------------------------------------


@dataclass
class WhileRuleInstance:
    b: object
    c: Command
    r: StateRel
    q: StateRel
    p: StateSet
    p_t: StateSet
    p_f: StateSet
    p_x: StateSet
    variant: VariantSpec
    depth: int = 4


def while_obligations(space: StateSpace, inst: WhileRuleInstance, kind: Engine) -> dict:
    n = inst.depth
    z = inst.variant
    qstar = refl_trans_closure(inst.q, space)
    prem = {
        "well-founded": fact(z.well_founded(), n, kind, "variant order well-founded"),
        "transitive": fact(z.transitive(), n, kind, "variant order transitive"),
        "tolerates": fact(tolerates(qstar, inst.r, inst.p), n, kind,
                          "closure of q tolerates r from p"),
        "non-increasing": fact(inst.r <= z.non_increasing_rel(space), n, kind,
                               "interference never increases the variant"),
    }
    prem.update(guard_premises(space, inst.p, inst.r, inst.b, inst.p_t, inst.p_f, n, kind,
                               prefix="while"))
    prem["while-infeas"] = establishes(space, inst.p_x & inst.p, inst.r, inst.b, TRUE,
                                       frozenset(), n, kind)
    rl = rely(space, inst.r)
    for k in z.carrier:
        goal = (z.lt_set(space, k) | inst.p_x) & inst.p
        spec = Conj(rl, Seq(assert_(space, inst.p_t & z.le_set(space, k)),
                            post_spec(space, range_restrict(qstar, goal))))
        prem[f"while-ref {k}"] = refines(space, spec, inst.c, n, kind)
    return prem


def while_conclusion(space: StateSpace, inst: WhileRuleInstance, kind: Engine) -> Verdict:
    qstar = refl_trans_closure(inst.q, space)
    lhs = Conj(rely(space, inst.r),
               Seq(assert_(space, inst.p), post_spec(space, range_restrict(qstar, inst.p_f))))
    return refines(space, lhs, while_loop(space, inst.b, inst.c), inst.depth, kind)


def check_while_theorem(space: StateSpace, inst: WhileRuleInstance,
                        engine=Engine.GRAPH) -> Verdict:
    kind = _kind(engine)
    t0 = time.perf_counter()
    prem = while_obligations(space, inst, kind)
    return judge(prem, while_conclusion(space, inst, kind), inst.depth, kind, t0)


__all__ = [
    "ConditionalRuleInstance", "ExpressionRuleInstance", "RULES", "RecursionRuleInstance",
    "WhileRuleInstance", "bool_set", "check_conditional_theorem", "check_expression_rule",
    "check_recursion_theorem", "check_while_theorem", "establishes_lv", "fact", "judge",
    "while_conclusion", "while_obligations",
]
