import pytest
from hypothesis import given, settings, strategies as st

from rgkernel.state_model import (
    FALSE, TRUE, Base, FinSet, Indexed, Int, StateSpace, StateSpaceTooLarge, UndeclaredLValue,
    compose, domain_restrict, identity_on, int_range, is_transitive, is_well_founded,
    range_restrict, refl_trans_closure, stable, stable_closure, subsets_domain, tolerates,
)


class TestStateSpace:
    def test_single_variable(self, bit):
        assert bit.size == 2
        assert [bit.value(i, "x") for i in range(2)] == [Int(0), Int(1)]

    def test_product(self):
        assert StateSpace.of(x=[0, 1], y=[0, 1]).size == 4

    def test_powerset_pair(self):
        dom = subsets_domain([0, 1])
        sp = StateSpace([(Base("w"), dom), (Base("sample"), dom)])
        assert sp.size == 16
        assert len(set(sp.states)) == 16

    def test_booleans_distinct(self):
        assert TRUE != FALSE

    def test_duplicate_lvalue_rejected(self):
        with pytest.raises(ValueError):
            StateSpace([(Base("x"), int_range(0, 1)), (Base("x"), int_range(0, 1))])

    def test_undeclared(self, bit):
        with pytest.raises(UndeclaredLValue):
            bit.value(0, "y")

    def test_cap(self):
        with pytest.raises(StateSpaceTooLarge):
            StateSpace([(Base(f"v{k}"), int_range(0, 9)) for k in range(8)], cap=1000)

    def test_update_stays_in_domain(self, bit):
        assert bit.update(0, Base("x"), Int(1)) == 1
        assert bit.update(0, Base("x"), Int(7)) is None

    def test_arrays(self):
        a = Base("a")
        sp = StateSpace([(Indexed(a, Int(0)), int_range(0, 1)),
                         (Indexed(a, Int(1)), int_range(0, 1))])
        assert sp.size == 4
        assert sp.has(Indexed(a, Int(1)))
        assert not sp.has(Indexed(a, Int(2)))

    def test_finset_values(self):
        assert FinSet(frozenset({1})) in subsets_domain([0, 1])


class TestRelations:
    def test_compose(self, bit):
        r = frozenset({(0, 1)})
        assert compose(r, bit.identity) == r
        assert compose(r, frozenset({(1, 0)})) == {(0, 0)}
        assert compose(r, frozenset()) == frozenset()

    def test_range_restrict(self, bit):
        assert range_restrict(bit.univ, bit.all) == bit.univ
        assert range_restrict(frozenset({(0, 1)}), frozenset({0})) == frozenset()
        assert range_restrict(frozenset(), frozenset({0})) == frozenset()

    def test_domain_restrict(self, bit):
        r = frozenset({(0, 1), (1, 0)})
        assert domain_restrict(bit.all, r) == r
        assert domain_restrict(frozenset(), r) == frozenset()
        assert domain_restrict(frozenset({0}), r) == {(0, 1)}

    def test_closure(self, bit):
        assert refl_trans_closure(frozenset(), bit) == bit.identity
        assert refl_trans_closure(frozenset({(0, 1)}), bit) == bit.identity | {(0, 1)}
        assert refl_trans_closure(bit.univ, bit) == bit.univ

    def test_identity_on(self, two_bools):
        sp = two_bools
        assert identity_on(sp, sp.lvalues) == sp.identity
        assert identity_on(sp, []) == sp.univ
        assert len(identity_on(sp, ["x"])) == 8

    def test_stable(self, bit):
        assert stable(bit.all, bit.univ)
        assert not stable(frozenset({0}), frozenset({(0, 1)}))
        assert stable(frozenset({0}), bit.identity)

    def test_tolerates(self, bit):
        for r in (frozenset(), bit.identity, bit.univ, frozenset({(0, 1)})):
            assert tolerates(bit.univ, r, bit.all)
        assert not tolerates(bit.identity, bit.univ, bit.all)

    def test_well_founded(self):
        lt = {(a, b) for a in range(3) for b in range(3) if a < b}
        le = {(a, b) for a in range(2) for b in range(2) if a <= b}
        assert is_well_founded(range(3), lt)
        assert not is_well_founded(range(2), le)
        subsets = [frozenset(), frozenset({0}), frozenset({1}), frozenset({0, 1})]
        strict = {(a, b) for a in subsets for b in subsets if a < b}
        assert is_well_founded(subsets, strict)
        assert is_transitive(strict)


def _rel(n):
    pairs = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
    return st.frozensets(pairs, max_size=n * n)


class TestRelationProperties:
    sp = StateSpace.of(x=[0, 1, 2])

    @given(_rel(3), _rel(3), _rel(3))
    @settings(max_examples=60, deadline=None)
    def test_compose_assoc(self, a, b, c):
        assert compose(compose(a, b), c) == compose(a, compose(b, c))

    @given(_rel(3))
    @settings(max_examples=60, deadline=None)
    def test_closure_is_reflexive_transitive(self, r):
        star = refl_trans_closure(r, self.sp)
        assert self.sp.identity <= star and r <= star
        assert compose(star, star) == star

    @given(st.frozensets(st.integers(0, 2)), _rel(3))
    @settings(max_examples=60, deadline=None)
    def test_stable_closure(self, p, r):
        s = stable_closure(p, r)
        assert p <= s and stable(s, r)
