import pytest
from hypothesis import given, settings, strategies as st

from rgkernel.language import Test as Filter
from rgkernel.language import (
    TOP, Binary, Choice, Conj, Pgm, Seq, Var, VariantSpec, assignment, const, deref,
    eval_expr, post_spec, rely,
)
from rgkernel.laws import (
    ConditionalRuleInstance, ExpressionRuleInstance, RecursionRuleInstance, WhileRuleInstance,
    check_conditional_theorem, check_expression_rule, check_recursion_theorem,
    check_while_theorem, hoare_loop_space, negative_control_hoare_loop,
)
from rgkernel.laws.instances import (
    conditional_instance, counter_space, expression_instance, expression_space,
    recursion_instance, while_instance,
)
from rgkernel.laws.generators import rng_for
from rgkernel.laws.sweeps import THEOREMS, sweep_theorem
from rgkernel.laws.theorems import RULES
from rgkernel.semantics import ENV, A, denote
from rgkernel.state_model import Base, Int, identity_on
from rgkernel.verdict import Outcome

NOT_ALARM = {Outcome.HOLDS, Outcome.PREMISE_VIOLATION}


def n_rel(space, pred):
    n = Base("n")
    return space.rel_where(lambda a, b: pred(a[n].value, b[n].value))


class TestExpressionRule:
    def test_constant(self):
        sp = expression_space()
        p = sp.set_where(lambda m: m[Base("x")].value == 0)
        inst = ExpressionRuleInstance("const", p, sp.identity, const(1), Int(1), p)
        assert check_expression_rule(sp, inst).holds
        miss = ExpressionRuleInstance("const", p, sp.identity, const(1), Int(0), frozenset())
        assert check_expression_rule(sp, miss).holds

    def test_binary_with_preserving_rely(self):
        sp = expression_space()
        r = identity_on(sp, ["x", "y"])
        e = Binary(deref("x"), "+", deref("y"))

        def final(ex, k):
            return denote(sp, Conj(rely(sp, r), eval_expr(sp, ex, k)), 3).final_states()

        sub1 = {Int(v): final(deref("x"), Int(v)) for v in (0, 1)}
        sub2 = {Int(v): final(deref("y"), Int(v)) for v in (0, 1)}
        post = sp.set_where(lambda m: m[Base("x")].value + m[Base("y")].value == 1)
        inst = ExpressionRuleInstance("binary", sp.all, r, e, Int(1), post, sub1, sub2)
        assert check_expression_rule(sp, inst).holds

    def test_unstable_precondition(self):
        sp = expression_space()
        p = sp.set_where(lambda m: m[Base("x")].value == 0)
        e = deref("x")
        inst = ExpressionRuleInstance("deref", p, sp.univ, e, Int(0), p, {}, {})
        v = check_expression_rule(sp, inst)
        assert v.outcome is Outcome.PREMISE_VIOLATION
        assert not v.obligations["p-stable"].holds


class TestRecursionRule:
    def test_identity_function(self):
        sp = counter_space(2)
        z = VariantSpec.less_than(sp, deref("n"))
        inst = RecursionRuleInstance("x", Var("x"), TOP, frozenset(), z, 3)
        assert check_recursion_theorem(sp, inst).holds

    def _countdown(self, decreasing=True):
        sp = counter_space(2)
        z = VariantSpec.less_than(sp, deref("n"))
        step = n_rel(sp, lambda a, b: b == a - 1) if decreasing else n_rel(sp, lambda a, b: b == a)
        zero = sp.set_where(lambda m: m[Base("n")].value == 0)
        body = Choice((Filter(zero), Seq(Filter(sp.all - zero), Seq(Pgm(step), Var("x")))))
        return sp, RecursionRuleInstance("x", body, post_spec(sp, sp.univ), frozenset(), z, 4)

    def test_countdown(self):
        sp, inst = self._countdown()
        assert check_recursion_theorem(sp, inst).holds

    def test_missing_decrease(self):
        sp, inst = self._countdown(decreasing=False)
        assert check_recursion_theorem(sp, inst).outcome is Outcome.PREMISE_VIOLATION


class TestWhileRule:
    def _loop(self, top=3, r=None):
        sp = counter_space(top)
        n = Base("n")
        b = Binary(const(0), "<", deref("n"))
        c = assignment(sp, n, Binary(deref("n"), "-", const(1)))
        z = VariantSpec.less_than(sp, deref("n"))
        zero = sp.set_where(lambda m: m[n].value == 0)
        r = sp.identity if r is None else r
        return sp, WhileRuleInstance(b, c, r, sp.univ, sp.all, sp.all - zero, zero,
                                     frozenset(), z, 4)

    def test_countdown_without_early_exit(self):
        sp, inst = self._loop()
        v = check_while_theorem(sp, inst)
        assert v.holds, v.detail

    def test_increasing_interference(self):
        sp, inst = self._loop(2)
        inst.r = inst.r | n_rel(sp, lambda a, b: b == a + 1)
        v = check_while_theorem(sp, inst)
        assert v.outcome is Outcome.PREMISE_VIOLATION
        assert not v.obligations["non-increasing"].holds


class TestNegativeControl:
    @pytest.mark.parametrize("depth", [3, 4, 5])
    def test_interference_breaks_sequential_rule(self, depth):
        v = negative_control_hoare_loop("univ", depth)
        assert v.fails
        assert all(o.holds for k, o in v.obligations.items() if k.startswith("sequential"))
        t = v.counterexample
        assert t.status is A and t.steps[-1][0] == ENV
        sp = hoare_loop_space()
        assert sp.value(t.steps[-1][1], "x") == Int(1)

    def test_no_interference_recovers_soundness(self):
        assert negative_control_hoare_loop("identity", 5).holds

    def test_stuttering_fixpoint_gap(self):
        v = negative_control_hoare_loop("identity", 3)
        assert v.obligations["fixpoint-gap"].holds


CHECKS = {
    "expr": (lambda rng: expression_instance(RULES[rng.randrange(len(RULES))], rng, 3),
             check_expression_rule),
    "cond": (lambda rng: conditional_instance(rng, 3), check_conditional_theorem),
    "rec": (lambda rng: recursion_instance(rng, 4), check_recursion_theorem),
    "while": (lambda rng: while_instance(rng, 4), check_while_theorem),
}


@pytest.mark.parametrize("kind", list(CHECKS))
@given(seed=st.integers(0, 2 ** 32))
@settings(max_examples=40, deadline=None)
def test_no_soundness_alarm(kind, seed):
    make, check = CHECKS[kind]
    space, inst = make(rng_for(seed, "prop", kind))
    assert check(space, inst).outcome in NOT_ALARM


@pytest.mark.parametrize("theorem_id", list(THEOREMS))
def test_named_sweeps(theorem_id):
    res = sweep_theorem(theorem_id, 20, seed=11)
    assert res.checked == 20 and res.ok
    assert res.outcomes[Outcome.HOLDS] > 0


def test_unknown_theorem():
    with pytest.raises(KeyError):
        sweep_theorem("intro-nothing", 1)
