import pytest

from rgkernel.language import Test as Filter
from rgkernel.language import (
    BOT, TOP, ArrayIndex, Binary, Choice, Conj, Mu, Nu, Pgm, Seq, Var, Variable, alpha,
    assert_, assert_alt, choice, const, deref, eval_expr, eval_lvexpr, expr_values, fin,
    idle, nil, post_spec, rely, size, substitute, term,
)
from rgkernel.refinement import equals
from rgkernel.semantics import Engine, denote, feasible
from rgkernel.state_model import Base, Indexed, Int, StateSpace, int_range


class TestConstruction:
    def test_empty_choice_is_bot(self):
        assert choice() == BOT

    def test_free_vars(self):
        body = Choice((Filter(frozenset({0})), Seq(Pgm(frozenset({(0, 1)})), Var("x"))))
        assert body.free_vars == {"x"}
        assert Mu("x", body).free_vars == frozenset()

    def test_substitute_respects_binding(self):
        inner = Nu("x", Var("x"))
        assert substitute(inner, "x", TOP) == inner
        assert substitute(Seq(Var("x"), Var("y")), "x", TOP) == Seq(TOP, Var("y"))

    def test_size(self):
        assert size(Seq(TOP, Choice((BOT, TOP)))) == 5

    def test_open_command_rejected(self, bit):
        with pytest.raises(ValueError):
            denote(bit, Var("x"), 2)


class TestDerivedCommands:
    @pytest.mark.parametrize("depth", [0, 1, 2, 3])
    def test_assert_extremes(self, bit, depth):
        assert equals(bit, assert_(bit, bit.all), nil(bit), depth).holds
        assert equals(bit, assert_(bit, frozenset()), TOP, depth).holds

    @pytest.mark.parametrize("p", [frozenset(), frozenset({0}), frozenset({1}), frozenset({0, 1})])
    def test_assert_alternative_form(self, bit, p):
        assert equals(bit, assert_(bit, p), assert_alt(bit, p), 3).holds

    @pytest.mark.parametrize("depth", [1, 2, 3, 4])
    def test_post_univ_is_term(self, trit, depth):
        assert equals(trit, post_spec(trit, trit.univ), term(trit), depth).holds

    def test_post_restricted_range(self, trit):
        q = frozenset({(0, 1), (1, 2), (2, 2), (0, 0)})
        p = frozenset({1, 2})
        q_p = frozenset((a, b) for a, b in q if b in p)
        assert equals(trit, post_spec(trit, q_p), Seq(post_spec(trit, q), Filter(p)), 3).holds

    def test_post_empty_never_terminates(self, bit):
        assert not denote(bit, post_spec(bit, frozenset()), 3).terminated()


class TestExpressions:
    def test_constant(self, bit):
        five = const(5)
        assert equals(bit, eval_expr(bit, five, Int(5)), idle(bit), 3).holds
        assert equals(bit, eval_expr(bit, five, Int(4)), BOT, 3).holds

    def test_nonatomic_sum(self, bit):
        e = Binary(deref("x"), "+", deref("x"))
        loose = denote(bit, Conj(rely(bit, bit.univ), eval_expr(bit, e, Int(1))), 3)
        tight = denote(bit, Conj(rely(bit, bit.identity), eval_expr(bit, e, Int(1))), 3)
        assert feasible(loose)
        assert not feasible(tight)

    def test_values_include_constants(self, bit):
        e = Binary(deref("x"), "+", const(5))
        vals = set(expr_values(bit, e))
        assert {Int(5), Int(6)} <= vals

    def test_lvalue_evaluation(self):
        a, j = Base("a"), Base("j")
        sp = StateSpace([(Indexed(a, Int(0)), int_range(0, 1)),
                         (Indexed(a, Int(1)), int_range(0, 1)), (j, int_range(1, 1))])
        assert equals(sp, eval_lvexpr(sp, Variable("j"), j), idle(sp), 3).holds
        elem = ArrayIndex(Variable("a"), const(0))
        assert equals(sp, eval_lvexpr(sp, elem, j), BOT, 3).holds
        # j is always 1 here, so a[*j] can never denote a[0]
        dyn = ArrayIndex(Variable("a"), deref("j"))
        assert not feasible(denote(sp, eval_lvexpr(sp, dyn, Indexed(a, Int(0))), 3))
        assert feasible(denote(sp, eval_lvexpr(sp, dyn, Indexed(a, Int(1))), 3))


class TestIteration:
    def test_fin_of_alpha_terminates_everywhere(self, bit):
        ts = denote(bit, fin(bit, alpha(bit)), 2)
        assert ts.final_states() == bit.all
