import pytest
from hypothesis import given, settings, strategies as st

from rgkernel.language import Test as Filter
from rgkernel.language import BOT, TOP, Choice, Conj, Pgm, deref, eval_expr, nil, rely
from rgkernel.laws.generators import random_command, rng_for
from rgkernel.refinement import equals, establishes, hoare_triple, refines, strongest_post
from rgkernel.semantics import T, Engine, Trace, denote
from rgkernel.state_model import Int, StateSpace
from rgkernel.verdict import Outcome, Verdict, combine


class TestRefines:
    def test_weaker_test_refines_stronger(self, bit):
        assert refines(bit, Filter(frozenset({0, 1})), Filter(frozenset({0})), 2).holds

    @pytest.mark.parametrize("c", [BOT, TOP, Pgm(frozenset({(0, 1)})), Filter(frozenset({1}))])
    def test_bot_is_least(self, bit, c):
        assert refines(bit, c, BOT, 3).holds

    @pytest.mark.parametrize("depth", [0, 1, 3])
    @pytest.mark.parametrize("engine", [Engine.ENUM, Engine.GRAPH])
    def test_disjoint_tests_fail_with_witness(self, bit, depth, engine):
        v = refines(bit, Filter(frozenset({0})), Filter(frozenset({1})), depth, engine)
        assert v.outcome is Outcome.FAILS
        assert v.counterexample == Trace(1, (), T)

    def test_top_refines_everything(self, bit):
        assert refines(bit, TOP, Pgm(bit.univ), 3).holds
        assert not refines(bit, Pgm(bit.univ), TOP, 3).holds

    def test_equals_reports_direction(self, bit):
        v = equals(bit, Pgm(bit.univ), TOP, 2)
        assert v.fails and v.detail.startswith("left")


class TestTriples:
    def test_nil_keeps_anything(self, bit):
        for p in (frozenset(), frozenset({0}), bit.all):
            assert hoare_triple(bit, p, nil(bit), p, 3).holds

    def test_top_satisfies_every_triple(self, bit):
        for p in (frozenset(), frozenset({0}), bit.all):
            for q in (frozenset(), frozenset({1}), bit.all):
                assert hoare_triple(bit, p, TOP, q, 3).holds

    def test_read_under_identity(self, bit):
        zero = frozenset({0})
        c = Conj(rely(bit, bit.identity), eval_expr(bit, deref("x"), Int(0)))
        assert hoare_triple(bit, zero, c, zero, 3).holds

    def test_interference_after_read(self, bit):
        v = establishes(bit, bit.all, bit.univ, deref("x"), Int(0), frozenset({0}), 3)
        assert v.fails

    def test_read_without_interference(self, bit):
        assert establishes(bit, bit.all, bit.identity, deref("x"), Int(0), frozenset({0}), 3).holds

    def test_strongest_post(self, trit):
        step = frozenset({(0, 1), (1, 2)})
        assert strongest_post(trit, frozenset({0}), Pgm(step), 2) == {1}
        assert strongest_post(trit, trit.all, Filter(frozenset({2})), 2) == {2}


class TestVerdicts:
    def test_combine_ranks(self):
        g = Engine.GRAPH
        ok = Verdict(Outcome.HOLDS, 1, g)
        bad = Verdict(Outcome.FAILS, 1, g)
        unk = Verdict(Outcome.INCONCLUSIVE, 1, g)
        assert combine(1, g, {"a": ok, "b": ok}).holds
        assert combine(1, g, {"a": ok, "b": bad}).outcome is Outcome.FAILS
        assert combine(1, g, {"a": bad, "b": unk}).outcome is Outcome.INCONCLUSIVE

    def test_truthiness(self):
        assert Verdict(Outcome.HOLDS, 0, Engine.ENUM)
        assert not Verdict(Outcome.PREMISE_VIOLATION, 0, Engine.ENUM)


SPACE = StateSpace.of(x=[0, 1])


class TestRefinementProperties:
    @given(st.integers(0, 2 ** 32), st.integers(0, 2 ** 32), st.integers(0, 3))
    @settings(max_examples=100, deadline=None)
    def test_engine_verdicts_agree(self, s1, s2, depth):
        c = random_command(SPACE, rng_for(s1, "ref"), 6)
        d = random_command(SPACE, rng_for(s2, "ref"), 6)
        a = refines(SPACE, c, d, depth, Engine.ENUM)
        b = refines(SPACE, c, d, depth, Engine.GRAPH)
        assert a.outcome is b.outcome

    @given(st.integers(0, 2 ** 32), st.integers(0, 2 ** 32), st.integers(0, 3))
    @settings(max_examples=100, deadline=None)
    def test_choice_is_upper_bound(self, s1, s2, depth):
        c = random_command(SPACE, rng_for(s1, "ub"), 5)
        d = random_command(SPACE, rng_for(s2, "ub"), 5)
        assert refines(SPACE, Choice((c, d)), c, depth).holds
        assert refines(SPACE, Choice((c, d)), d, depth).holds

    @given(st.integers(0, 2 ** 32), st.integers(0, 3))
    @settings(max_examples=60, deadline=None)
    def test_counterexample_is_genuine(self, s, depth):
        c = random_command(SPACE, rng_for(s, "cx", 0), 6)
        d = random_command(SPACE, rng_for(s, "cx", 1), 6)
        v = refines(SPACE, c, d, depth, Engine.ENUM)
        if v.fails:
            t = v.counterexample
            assert denote(SPACE, d, depth, Engine.ENUM).covers(t)
            assert not denote(SPACE, c, depth, Engine.ENUM).covers(t)
