"""Finite values, l-values, states and the relational algebra over them.

A :class:`StateSpace` enumerates every total assignment of declared l-values
to values of their domains.  State sets and relations are extensional:
``frozenset`` of state indices and ``frozenset`` of index pairs, keyed by the
space's fixed enumeration order.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

DEFAULT_STATE_CAP = 4096

StateSet = frozenset  # frozenset[int]
StateRel = frozenset  # frozenset[tuple[int, int]]


class StateSpaceTooLarge(ValueError):
    pass


class UndeclaredLValue(KeyError):
    pass


# -- values -----------------------------------------------------------------


@dataclass(frozen=True)
class Bool:
    value: bool

    def __str__(self) -> str:
        return "true" if self.value else "false"


@dataclass(frozen=True)
class Int:
    value: int

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class FinSet:
    items: frozenset

    def __str__(self) -> str:
        return "{" + ",".join(str(i) for i in sorted(self.items)) + "}"


Value = Bool | Int | FinSet

TRUE = Bool(True)
FALSE = Bool(False)
BOOLEANS = (FALSE, TRUE)


def value_key(v: Value) -> tuple:
    """Total order on values: booleans, then integers, then sets."""
    if isinstance(v, Bool):
        return (0, int(v.value))
    if isinstance(v, Int):
        return (1, v.value)
    return (2, len(v.items), tuple(sorted(v.items)))


def to_value(x) -> Value:
    """Lift a plain Python value (bool, int, iterable of ints)."""
    if isinstance(x, (Bool, Int, FinSet)):
        return x
    if isinstance(x, bool):
        return Bool(x)
    if isinstance(x, int):
        return Int(x)
    return FinSet(frozenset(int(i) for i in x))


def bool_domain() -> tuple[Value, ...]:
    return BOOLEANS


def int_domain(values: Iterable[int]) -> tuple[Value, ...]:
    return tuple(Int(v) for v in sorted(set(values)))


def int_range(lo: int, hi: int) -> tuple[Value, ...]:
    return int_domain(range(lo, hi + 1))


def subsets_domain(universe: Iterable[int]) -> tuple[Value, ...]:
    elems = sorted(set(universe))
    out = []
    for n in range(len(elems) + 1):
        for combo in itertools.combinations(elems, n):
            out.append(FinSet(frozenset(combo)))
    return tuple(out)


# -- l-values ---------------------------------------------------------------


@dataclass(frozen=True)
class Base:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Indexed:
    array: "LValue"
    index: Value

    def __str__(self) -> str:
        return f"{self.array}[{self.index}]"


LValue = Base | Indexed


def lvalue_depth(lv: LValue) -> int:
    return 0 if isinstance(lv, Base) else 1 + lvalue_depth(lv.array)


def lvalue_root(lv: LValue) -> str:
    while isinstance(lv, Indexed):
        lv = lv.array
    return lv.name


# -- state spaces -----------------------------------------------------------

State = tuple  # tuple[Value, ...] in declaration order


def enumerate_states(
    decl: Sequence[tuple[LValue, Sequence[Value]]], cap: int = DEFAULT_STATE_CAP
) -> list[State]:
    """Cartesian product of the per-l-value domains, in declaration order."""
    if not decl:
        raise ValueError("empty state-space declaration")
    size = 1
    for lv, dom in decl:
        if not dom:
            raise ValueError(f"empty domain for {lv}")
        size *= len(dom)
        if size > cap:
            raise StateSpaceTooLarge(f"state space exceeds cap {cap}")
    return [tuple(vals) for vals in itertools.product(*(tuple(d) for _, d in decl))]


class StateSpace:
    """Enumerated state universe for a declaration.

    Spaces compare by identity; commands, sets and relations built against one
    space are meaningless in another.
    """

    def __init__(
        self,
        decl: Sequence[tuple[LValue, Sequence[Value]]],
        cap: int = DEFAULT_STATE_CAP,
    ):
        lvs = [lv for lv, _ in decl]
        if len(set(lvs)) != len(lvs):
            raise ValueError("duplicate l-value in declaration")
        self.lvalues: tuple[LValue, ...] = tuple(lvs)
        self.domains: dict[LValue, tuple[Value, ...]] = {
            lv: tuple(sorted(set(d), key=value_key)) for lv, d in decl
        }
        self.states: tuple[State, ...] = tuple(
            enumerate_states([(lv, self.domains[lv]) for lv in lvs], cap)
        )
        self._slot = {lv: i for i, lv in enumerate(self.lvalues)}
        self._index = {s: i for i, s in enumerate(self.states)}
        self.size = len(self.states)
        self.all: StateSet = frozenset(range(self.size))
        self.univ: StateRel = frozenset(
            (a, b) for a in range(self.size) for b in range(self.size)
        )
        self.identity: StateRel = frozenset((a, a) for a in range(self.size))
        universe = set(BOOLEANS)
        for d in self.domains.values():
            universe.update(d)
        self.universe: tuple[Value, ...] = tuple(sorted(universe, key=value_key))

    @classmethod
    def of(cls, **domains: Sequence) -> "StateSpace":
        """Shorthand: ``StateSpace.of(x=[0, 1], w=subsets_domain([0, 1]))``."""
        return cls([(Base(k), tuple(to_value(v) for v in d)) for k, d in domains.items()])

    def __repr__(self) -> str:
        decl = ", ".join(f"{lv}:{len(self.domains[lv])}" for lv in self.lvalues)
        return f"StateSpace({decl}; |Σ|={self.size})"

    def lvalue(self, name: str | LValue) -> LValue:
        lv = Base(name) if isinstance(name, str) else name
        if lv not in self._slot:
            raise UndeclaredLValue(str(lv))
        return lv

    def has(self, lv: LValue) -> bool:
        return lv in self._slot

    def slot(self, lv: LValue) -> int:
        try:
            return self._slot[lv]
        except KeyError:
            raise UndeclaredLValue(str(lv)) from None

    def index(self, state: State) -> int:
        return self._index[state]

    def value(self, i: int, lv: LValue | str) -> Value:
        return self.states[i][self.slot(self.lvalue(lv))]

    def state_map(self, i: int) -> dict[LValue, Value]:
        return dict(zip(self.lvalues, self.states[i]))

    def update(self, i: int, lv: LValue, v: Value) -> int | None:
        """Index of state ``i`` with ``lv`` set to ``v``; None if out of domain."""
        slot = self.slot(lv)
        if v not in self.domains[lv]:
            return None
        s = list(self.states[i])
        s[slot] = v
        return self._index[tuple(s)]

    def fmt_state(self, i: int) -> list[str]:
        return sorted(f"{lv}={v}" for lv, v in zip(self.lvalues, self.states[i]))

    def set_where(self, pred: Callable[[Mapping[LValue, Value]], bool]) -> StateSet:
        return frozenset(i for i in range(self.size) if pred(self.state_map(i)))

    def rel_where(
        self, pred: Callable[[Mapping[LValue, Value], Mapping[LValue, Value]], bool]
    ) -> StateRel:
        maps = [self.state_map(i) for i in range(self.size)]
        return frozenset(
            (a, b)
            for a in range(self.size)
            for b in range(self.size)
            if pred(maps[a], maps[b])
        )

    def complement(self, p: StateSet) -> StateSet:
        return self.all - p

    def complement_rel(self, r: StateRel) -> StateRel:
        return self.univ - r


# -- relational algebra ------------------------------------------------------


def _successors(r: Iterable[tuple[int, int]]) -> dict[int, set[int]]:
    succ: dict[int, set[int]] = {}
    for a, b in r:
        succ.setdefault(a, set()).add(b)
    return succ


def compose(r1: StateRel, r2: StateRel) -> StateRel:
    succ2 = _successors(r2)
    return frozenset((a, c) for a, b in r1 for c in succ2.get(b, ()))


def range_restrict(r: StateRel, p: StateSet) -> StateRel:
    return frozenset((a, b) for a, b in r if b in p)


def domain_restrict(p: StateSet, r: StateRel) -> StateRel:
    return frozenset((a, b) for a, b in r if a in p)


def post_image(r: StateRel, a: int) -> StateSet:
    return frozenset(b for x, b in r if x == a)


def refl_trans_closure(r: StateRel, space: StateSpace) -> StateRel:
    succ = _successors(r)
    out = set()
    for a in range(space.size):
        seen = {a}
        stack = [a]
        while stack:
            x = stack.pop()
            for y in succ.get(x, ()):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        out.update((a, b) for b in seen)
    return frozenset(out)


def identity_on(space: StateSpace, lvs: Iterable[LValue | str]) -> StateRel:
    slots = [space.slot(space.lvalue(lv)) for lv in lvs]
    st = space.states
    return frozenset(
        (a, b)
        for a in range(space.size)
        for b in range(space.size)
        if all(st[a][k] == st[b][k] for k in slots)
    )


def stable(p: StateSet, r: StateRel) -> bool:
    return all(b in p for a, b in r if a in p)


def stable_closure(p: StateSet, r: StateRel) -> StateSet:
    """Least superset of ``p`` stable under ``r``."""
    succ = _successors(r)
    out = set(p)
    stack = list(p)
    while stack:
        x = stack.pop()
        for y in succ.get(x, ()):
            if y not in out:
                out.add(y)
                stack.append(y)
    return frozenset(out)


def tolerates(q: StateRel, r: StateRel, p: StateSet) -> bool:
    return (
        stable(p, r)
        and domain_restrict(p, compose(r, q)) <= q
        and domain_restrict(p, compose(q, r)) <= q
    )


def is_well_founded(carrier: Iterable, rel: Iterable[tuple]) -> bool:
    """Acyclicity check; on a finite carrier this is well-foundedness.

    A self-loop ``(k, k)`` counts as a cycle.
    """
    nodes = set(carrier)
    succ: dict = {}
    for a, b in rel:
        if a not in nodes or b not in nodes:
            continue
        if a == b:
            return False
        succ.setdefault(a, []).append(b)
    WHITE, GREY, BLACK = 0, 1, 2
    colour = dict.fromkeys(nodes, WHITE)
    for root in nodes:
        if colour[root] != WHITE:
            continue
        stack = [(root, iter(succ.get(root, ())))]
        colour[root] = GREY
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                colour[node] = BLACK
                stack.pop()
            elif colour[nxt] == GREY:
                return False
            elif colour[nxt] == WHITE:
                colour[nxt] = GREY
                stack.append((nxt, iter(succ.get(nxt, ()))))
    return True


def is_transitive(rel: Iterable[tuple]) -> bool:
    pairs = set(rel)
    succ = _successors(pairs)
    return all((a, c) in pairs for a, b in pairs for c in succ.get(b, ()))
