"""Seeded instance generators for the theorem checkers.

Postconditions are derived from strongest postconditions computed by the
engine, then randomly weakened (premises still hold) or strengthened
(premises usually break), so both the premise and the conclusion sides of
each checker get exercised.
"""
from __future__ import annotations

import random

from ..language import (
    ArrayIndex, Binary, Choice, Conj, Const, Env, Pgm, Seq, Test, Unary, Var, Variable,
    VariantSpec, apply_binary, apply_unary, assignment, atomic_spec, const, deref, eval_expr,
    eval_lvexpr, expr_values, frame, post_spec, rely,
)
from ..semantics import Engine, denote
from ..state_model import (
    FALSE, TRUE, Base, Indexed, Int, StateSpace, bool_domain, compose, int_range,
    refl_trans_closure, stable_closure,
)
from .generators import random_relation, random_set, rng_for
from .theorems import (
    ConditionalRuleInstance, ExpressionRuleInstance, RULES, RecursionRuleInstance,
    WhileRuleInstance,
)


def _sp(space, p, c, depth, engine=Engine.GRAPH) -> frozenset:
    return denote(space, c, depth, engine).final_states(p)


def _jitter(space, s: frozenset, rng: random.Random) -> frozenset:
    """Usually weaken, sometimes strengthen, a postcondition."""
    roll = rng.random()
    if roll < 0.2 and s:
        return s - {rng.choice(sorted(s))}
    if roll < 0.6:
        return s | random_set(space, rng, 0.3)
    return s


def _env(space, rng) -> frozenset:
    """Random interference, biased towards small relations."""
    r = random_relation(space, rng, rng.choice((0.05, 0.1, 0.2)))
    return r | space.identity if rng.random() < 0.5 else r


# -- expressions -------------------------------------------------------------


def expression_space() -> StateSpace:
    return StateSpace([(Base("x"), int_range(0, 1)), (Base("y"), int_range(0, 1))])


def array_space() -> StateSpace:
    a = Base("a")
    return StateSpace([
        (Indexed(a, Int(0)), int_range(0, 1)),
        (Indexed(a, Int(1)), int_range(0, 1)),
        (Base("j"), int_range(0, 1)),
    ])


_BINOPS = ("+", "-", "=", "<", "<=", "!=")


def expression_instance(rule: str, rng: random.Random, depth: int = 3):
    space = array_space() if rule == "array" else expression_space()
    r = _env(space, rng)
    p = stable_closure(random_set(space, rng, 0.4) or frozenset({0}), r)
    if rng.random() < 0.1:
        p = random_set(space, rng)  # possibly unstable
    rl = rely(space, r)

    def sp(c):
        return _sp(space, p, Conj(rl, c), depth)

    if rule == "const":
        kappa = Int(rng.randint(0, 1))
        k = rng.choice(space.universe)
        e = Const(kappa)
        post = p if kappa == k else frozenset()
        return space, ExpressionRuleInstance(rule, p, r, e, k, post, depth=depth)
    if rule == "var":
        e = Variable(rng.choice(("x", "y")))
        lv = rng.choice(space.lvalues)
        post = p if lv == Base(e.name) else frozenset()
        return space, ExpressionRuleInstance(rule, p, r, e, lv, post, depth=depth)
    if rule == "deref":
        e = deref(rng.choice(("x", "y")))
        k = Int(rng.randint(0, 1))
        sub1 = {lv: _jitter(space, sp(eval_lvexpr(space, e.lve, lv)), rng) for lv in space.lvalues}
        need = frozenset()
        for lv, q1 in sub1.items():
            slot = space.slot(lv)
            need |= frozenset(i for i in q1 if space.states[i][slot] == k)
        post = stable_closure(need, r)
        if rng.random() < 0.2:
            post = _jitter(space, post, rng)
        return space, ExpressionRuleInstance(rule, p, r, e, k, post, sub1, depth=depth)
    if rule == "unary":
        inner = Binary(deref("x"), "=", deref("y")) if rng.random() < 0.5 else deref("x")
        op = "not" if isinstance(inner, Binary) else "neg"
        e = Unary(op, inner)
        k = rng.choice((TRUE, FALSE)) if op == "not" else Int(rng.randint(-1, 0))
        sub1 = {k1: _jitter(space, sp(eval_expr(space, inner, k1)), rng)
                for k1 in expr_values(space, inner)}
        post = frozenset()
        for k1, q1 in sub1.items():
            if apply_unary(op, k1) == k:
                post |= q1
        if rng.random() < 0.2:
            post = _jitter(space, post, rng)
        return space, ExpressionRuleInstance(rule, p, r, e, k, post, sub1, depth=depth)
    if rule == "binary":
        op = rng.choice(_BINOPS)
        left = deref(rng.choice(("x", "y")))
        right = deref(rng.choice(("x", "y"))) if rng.random() < 0.8 else const(1)
        e = Binary(left, op, right)
        k = rng.choice(expr_values(space, e))
        sub1 = {k1: _jitter(space, sp(eval_expr(space, left, k1)), rng)
                for k1 in expr_values(space, left)}
        sub2 = {k2: _jitter(space, sp(eval_expr(space, right, k2)), rng)
                for k2 in expr_values(space, right)}
        post = frozenset()
        for k1 in sub1:
            for k2 in sub2:
                if apply_binary(op, k1, k2) == k:
                    post |= sub1[k1] & sub2[k2]
        if rng.random() < 0.2:
            post = _jitter(space, post, rng)
        return space, ExpressionRuleInstance(rule, p, r, e, k, post, sub1, sub2, depth)
    if rule == "array":
        a = Base("a")
        idx = Int(rng.randint(0, 1))
        target = Indexed(a, idx)
        e = ArrayIndex(Variable("a"), deref("j"))
        sub1 = {a: _jitter(space, sp(eval_lvexpr(space, Variable("a"), a)), rng)}
        sub2 = {idx: _jitter(space, sp(eval_expr(space, deref("j"), idx)), rng)}
        post = sub1[a] & sub2[idx]
        if rng.random() < 0.2:
            post = _jitter(space, post, rng)
        return space, ExpressionRuleInstance(rule, p, r, e, target, post, sub1, sub2, depth)
    raise ValueError(rule)


def expression_instances(count: int, seed: int | None = None, depth: int = 3):
    """``count`` instances cycling through every expression rule."""
    for i in range(count):
        rule = RULES[i % len(RULES)]
        yield expression_instance(rule, rng_for(seed, "expr", i), depth)


# -- conditional ---------------------------------------------------------------


def _guards():
    x, y = deref("x"), deref("y")
    return [
        Binary(x, "=", const(0)),
        Binary(x, "=", y),
        Binary(x, "<", y),
        Unary("not", Binary(y, "=", const(1))),
        Binary(Binary(x, "=", const(0)), "and", Binary(y, "=", const(1))),
        Binary(x, "+", y),  # not boolean: exercises the boolean premise
    ]


def conditional_instance(rng: random.Random, depth: int = 3):
    space = expression_space()
    r = _env(space, rng)
    p = stable_closure(random_set(space, rng, 0.5) or space.all, r)
    star = refl_trans_closure(r, space)
    q = compose(compose(star, random_relation(space, rng, 0.4)), star)
    b = rng.choice(_guards())
    rl = rely(space, r)
    p_t = _jitter(space, _sp(space, p, Conj(rl, eval_expr(space, b, TRUE)), depth), rng)
    p_f = _jitter(space, _sp(space, p, Conj(rl, eval_expr(space, b, FALSE)), depth), rng)
    return space, ConditionalRuleInstance(b, q, r, p, p_t, p_f, depth)


def conditional_instances(count: int, seed: int | None = None, depth: int = 3):
    for i in range(count):
        yield conditional_instance(rng_for(seed, "cond", i), depth)


# -- recursion ----------------------------------------------------------------


def counter_space(top: int = 2, flag: bool = False) -> StateSpace:
    decl = [(Base("n"), int_range(0, top))]
    if flag:
        decl.append((Base("f"), bool_domain()))
    return StateSpace(decl)


def _by_n(space, pred):
    return space.rel_where(lambda a, b: pred(a[Base("n")].value, b[Base("n")].value))


def recursion_instance(rng: random.Random, depth: int = 4):
    space = counter_space(2, flag=rng.random() < 0.3)
    n_of = [space.value(i, "n").value for i in range(space.size)]
    z = VariantSpec.less_than(space, deref("n"))
    dec = _by_n(space, lambda a, b: b < a)
    step_rel = frozenset(pr for pr in dec if rng.random() < 0.6) or dec
    if rng.random() < 0.15:
        step_rel |= frozenset({rng.choice(sorted(space.univ))})  # may break the decrease
    exit_set = frozenset(i for i in range(space.size) if n_of[i] == 0)
    if rng.random() < 0.3:
        exit_set |= random_set(space, rng, 0.3)
    x = "f0"
    step = Pgm(step_rel)
    if rng.random() < 0.4:
        step = Seq(Env(_by_n(space, lambda a, b: b <= a)), step)
    body = Choice((Test(exit_set), Seq(step, Var(x))))
    q = rng.choice((space.univ, _by_n(space, lambda a, b: b <= a), _by_n(space, lambda a, b: b == 0)))
    s = post_spec(space, q)
    p_x = rng.choice((frozenset(), exit_set - frozenset(a for a, _ in step_rel)))
    return space, RecursionRuleInstance(x, body, s, p_x, z, depth)


def recursion_instances(count: int, seed: int | None = None, depth: int = 4):
    for i in range(count):
        yield recursion_instance(rng_for(seed, "rec", i), depth)


# -- while --------------------------------------------------------------------


def while_instance(rng: random.Random, depth: int = 4):
    space = counter_space(rng.choice((1, 2)))
    n = Base("n")
    z = VariantSpec.less_than(space, deref("n"))
    nonincr = _by_n(space, lambda a, b: b <= a)
    r = frozenset(pr for pr in nonincr if rng.random() < 0.4) | space.identity
    if rng.random() < 0.1:
        r |= _by_n(space, lambda a, b: b == a + 1)  # variant may increase
    b = Binary(const(0), "<", deref("n"))
    bodies = [
        lambda: assignment(space, n, Binary(deref("n"), "-", const(1))),
        lambda: frame(space, [n], atomic_spec(space, _by_n(space, lambda a, b: b == a - 1))),
        lambda: frame(space, [n], atomic_spec(space, _by_n(space, lambda a, b: b < a))),
        lambda: assignment(space, n, const(0)),
        lambda: assignment(space, n, deref("n")),  # no progress
    ]
    c = rng.choice(bodies)()
    q = rng.choice((space.univ, nonincr))
    p = space.all if rng.random() < 0.7 else stable_closure(random_set(space, rng) or space.all, r)
    rl = rely(space, r)
    p_t = _jitter(space, _sp(space, p, Conj(rl, eval_expr(space, b, TRUE)), depth), rng)
    p_f = _jitter(space, _sp(space, p, Conj(rl, eval_expr(space, b, FALSE)), depth), rng)
    zero = space.set_where(lambda m: m[n].value == 0)
    p_x = rng.choice((frozenset(), zero))
    return space, WhileRuleInstance(b, c, r, q, p, p_t, p_f, p_x, z, depth)


def while_instances(count: int, seed: int | None = None, depth: int = 4):
    for i in range(count):
        yield while_instance(rng_for(seed, "while", i), depth)


__all__ = [
    "array_space", "conditional_instance", "conditional_instances", "counter_space",
    "expression_instance", "expression_instances", "expression_space",
    "recursion_instance", "recursion_instances", "while_instance", "while_instances",
]
