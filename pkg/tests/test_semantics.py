import pytest
from hypothesis import given, settings, strategies as st

from rgkernel.language import Test as Filter
from rgkernel.language import (
    BOT, TOP, Choice, Conj, Env, Mu, Nu, Par, Pgm, Seq, Var, nil, om, alpha, term,
)
from rgkernel.laws.generators import random_command, rng_for
from rgkernel.semantics import (
    A, ENV, I, PI, T, Engine, Trace, denote, engines_agree, guarantee_violation,
    satisfies_guarantee,
)
from rgkernel.state_model import StateSpace

ENGINES = [Engine.ENUM, Engine.GRAPH]


def prefixes_present(ts):
    for t in ts.traces():
        for j in range(len(t.steps)):
            assert Trace(t.start, t.steps[:j], I) in ts


@pytest.mark.parametrize("engine", ENGINES)
class TestDenotation:
    def test_empty_final_test(self, bit, engine):
        ts = denote(bit, Seq(Pgm(bit.identity), Filter(frozenset())), 2, engine)
        assert set(ts.at(0)) == {Trace(0, (), I), Trace(0, ((PI, 0),), I)}

    def test_parallel_matching(self, bit, engine):
        step = frozenset({(0, 1)})
        ts = denote(bit, Par(Pgm(step), Env(step)), 1, engine)
        assert Trace(0, ((PI, 1),), T) in ts

    @pytest.mark.parametrize("c", [nil, lambda sp: Pgm(sp.univ), lambda sp: Env(sp.identity),
                                   lambda sp: BOT, term])
    def test_conj_with_top_aborts(self, bit, engine, c):
        assert denote(bit, Conj(TOP, c(bit)), 2, engine) == denote(bit, TOP, 2, engine)

    def test_top_is_immediate_abort(self, bit, engine):
        ts = denote(bit, TOP, 3, engine)
        assert Trace(0, (), A) in ts and Trace(1, (), A) in ts

    def test_baseline_everywhere(self, trit, engine):
        ts = denote(trit, BOT, 3, engine)
        assert set(ts.traces()) == {Trace(s, (), I) for s in range(3)}

    def test_nu_iteration_depth_two(self, bit, engine):
        body = Choice((nil(bit), Seq(Pgm(bit.univ), Var("x"))))
        ts = denote(bit, Nu("x", body), 2, engine)
        assert all(lab == PI for t in ts.traces() for lab, _ in t.steps)
        assert not ts.aborted()
        n_runs = sum(2 ** k for k in range(3)) * 2  # π paths of length 0..2 per start
        assert len(ts.terminated()) == n_runs
        assert len([t for t in ts.traces() if t.status == I]) == n_runs
        prefixes_present(ts)

    @pytest.mark.parametrize("depth", [0, 1, 2, 3, 4])
    def test_mu_nu_agree_when_guarded(self, bit, engine, depth):
        body = Choice((nil(bit), Seq(Pgm(frozenset({(0, 1), (1, 0)})), Var("x"))))
        assert denote(bit, Mu("x", body), depth, engine) == denote(bit, Nu("x", body), depth, engine)

    def test_nu_identity_is_top(self, bit, engine):
        assert denote(bit, Nu("x", Var("x")), 3, engine) == denote(bit, TOP, 3, engine)

    def test_mu_identity_is_bot(self, bit, engine):
        assert denote(bit, Mu("x", Var("x")), 3, engine) == denote(bit, BOT, 3, engine)

    def test_depth_bound(self, bit, engine):
        ts = denote(bit, om(bit, alpha(bit)), 3, engine)
        assert max(len(t.steps) for t in ts.traces()) == 3
        assert ts.validate() == []


class TestGuarantee:
    def test_program_within_its_own_guarantee(self, trit):
        g = frozenset({(0, 1), (1, 2)})
        assert satisfies_guarantee(trit, Pgm(g), g, 1).holds

    @pytest.mark.parametrize("engine", ENGINES)
    def test_unrestricted_program_breaks_identity(self, bit, engine):
        v = satisfies_guarantee(bit, Pgm(bit.univ), bit.identity, 1, engine)
        assert v.fails
        assert v.counterexample.steps[0][0] == PI

    def test_aborts_count_as_violations(self, bit):
        assert guarantee_violation(denote(bit, TOP, 1), bit.univ) is not None

    def test_env_steps_ignored(self, bit):
        assert satisfies_guarantee(bit, om(bit, Env(bit.univ)), frozenset(), 3).holds


# -- cross-engine properties -------------------------------------------------------

SPACES = {2: StateSpace.of(x=[0, 1]), 3: StateSpace.of(x=[0, 1, 2])}


@st.composite
def commands(draw):
    n = draw(st.sampled_from([2, 3]))
    seed = draw(st.integers(0, 2 ** 32))
    size = draw(st.integers(1, 8))
    sp = SPACES[n]
    return sp, random_command(sp, rng_for(seed, "hyp"), size)


class TestEngineProperties:
    @given(commands(), st.integers(0, 3))
    @settings(max_examples=150, deadline=None)
    def test_engines_agree(self, sc, depth):
        sp, c = sc
        assert engines_agree(sp, c, depth)

    @given(commands(), st.integers(0, 3))
    @settings(max_examples=100, deadline=None)
    def test_canonical_form(self, sc, depth):
        sp, c = sc
        ts = denote(sp, c, depth, Engine.ENUM)
        assert ts.validate() == []
        for s in range(sp.size):
            assert Trace(s, (), I) in ts
        prefixes_present(ts)

    @given(commands(), st.integers(1, 3))
    @settings(max_examples=80, deadline=None)
    def test_truncation_is_monotone(self, sc, depth):
        """Raising the bound leaves the strictly shorter traces unchanged."""
        sp, c = sc
        small = denote(sp, c, depth - 1).traces()
        big = denote(sp, c, depth).traces()
        assert {t for t in big if len(t.steps) < depth - 1} == {
            t for t in small if len(t.steps) < depth - 1}
