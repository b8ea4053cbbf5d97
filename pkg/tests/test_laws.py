import random

import pytest
from hypothesis import given, settings, strategies as st

from rgkernel.language import Pgm
from rgkernel.laws.catalogue import (
    LAWS, LawInstance, check_law, exhaustive_instances, get_law, law_ids, random_instance,
    sweep_law,
)
from rgkernel.laws.generators import random_command, random_relation, rng_for
from rgkernel.language import size
from rgkernel.state_model import StateSpace


class TestCatalogue:
    def test_ids_unique_and_known(self):
        ids = law_ids()
        assert len(ids) == len(set(ids)) >= 20
        with pytest.raises(KeyError):
            get_law("no-such-law")

    def test_unbound_metavariable(self, bit):
        with pytest.raises(ValueError):
            check_law(bit, LawInstance("seq-assoc", {"c1": Pgm(bit.univ)}))

    def test_assert_merge_instance(self, bit):
        inst = LawInstance("assert-merge", {"p1": frozenset({0}), "p2": frozenset({0, 1})}, 3)
        assert check_law(bit, inst).holds

    def test_spec_split_identity(self, bit):
        b = {"r1": bit.identity, "r2": bit.identity, "p": bit.all}
        assert check_law(bit, LawInstance("spec-split", b, 3)).holds

    def test_rely_distributes_over_seq(self, bit):
        b = {"r": bit.identity, "c1": Pgm(bit.univ), "c2": Pgm(bit.univ)}
        assert check_law(bit, LawInstance("rely-distrib-seq", b, 3)).holds

    def test_failing_premise_is_vacuous(self, trit):
        # q = identity does not tolerate arbitrary interference
        b = {"q": trit.identity, "r": trit.univ, "p": trit.all}
        v = check_law(trit, LawInstance("spec-tolerates", b, 2))
        assert v.holds and v.detail.startswith("vacuous")

    def test_exhaustive_counts(self, bit):
        assert sum(1 for _ in exhaustive_instances(bit, "assert-alt")) == 4
        assert sum(1 for _ in exhaustive_instances(bit, "spec-test")) == 16 * 4


class TestGenerators:
    def test_same_seed_same_stream(self):
        a = [rng_for(7, "x").random() for _ in range(3)]
        b = [rng_for(7, "x").random() for _ in range(3)]
        assert a == b != [rng_for(8, "x").random() for _ in range(3)]

    @given(st.integers(0, 2 ** 32), st.integers(1, 8))
    @settings(max_examples=100, deadline=None)
    def test_commands_closed_and_bounded(self, seed, n):
        sp = StateSpace.of(x=[0, 1])
        c = random_command(sp, random.Random(seed), n)
        assert size(c) <= n and not c.free_vars

    def test_relations_within_space(self, trit):
        r = random_relation(trit, random.Random(1))
        assert r <= trit.univ


@pytest.mark.parametrize("law_id", list(LAWS))
def test_law_sweep(bit, trit, law_id):
    """Every law over all small bindings and a seeded random sample."""
    ex = list(exhaustive_instances(bit, law_id, 3))[:300]
    assert sweep_law(bit, law_id, ex).ok
    rng = rng_for(None, "test-laws", law_id)
    rnd = sweep_law(trit, law_id, (random_instance(trit, law_id, rng, 3) for _ in range(40)))
    assert rnd.ok, [inst.describe() for inst, _ in rnd.failures[:3]]


def test_broken_law_is_detected(bit):
    """Sanity: the checker can say no. Pgm does not commute with Env in sequence."""
    from rgkernel.language import Env, Seq
    from rgkernel.refinement import equals
    step = frozenset({(0, 1)})
    assert equals(bit, Seq(Pgm(step), Env(bit.univ)), Seq(Env(bit.univ), Pgm(step)), 2).fails
