"""Wide-spectrum command language.

Primitive commands are ``Bot``, ``Top``, ``Test``, ``Pgm``, ``Env``, ``Choice``,
``Seq``, ``Par``, ``Conj`` and the fixed-point binders ``Mu``/``Nu``/``Var``.
Every derived form (assert, guar, rely, term, idle, specs, expression
evaluation, conditionals, loops) is a function that builds primitives for a
given :class:`~rgkernel.state_model.StateSpace`.
"""
from __future__ import annotations

import dataclasses
import functools
from dataclasses import dataclass
from typing import Callable, Iterable

from .state_model import (
    BOOLEANS,
    FALSE,
    TRUE,
    Base,
    Bool,
    FinSet,
    Indexed,
    Int,
    LValue,
    StateRel,
    StateSet,
    StateSpace,
    Value,
    identity_on,
    is_transitive,
    is_well_founded,
    value_key,
)


def _node(cls):
    """Frozen dataclass with a cached structural hash."""
    cls = dataclass(frozen=True)(cls)
    names = tuple(f.name for f in dataclasses.fields(cls))
    tag = cls.__name__

    def __hash__(self):
        h = self.__dict__.get("_h")
        if h is None:
            h = hash((tag,) + tuple(getattr(self, n) for n in names))
            object.__setattr__(self, "_h", h)
        return h

    cls.__hash__ = __hash__
    return cls


# -- commands ----------------------------------------------------------------


class Command:
    __slots__ = ()

    @property
    def free_vars(self) -> frozenset:
        fv = self.__dict__.get("_fv")
        if fv is None:
            fv = _free_vars(self)
            object.__setattr__(self, "_fv", fv)
        return fv


@_node
class Bot(Command):
    def __str__(self) -> str:
        return "⊥"


@_node
class Top(Command):
    def __str__(self) -> str:
        return "⊤"


@_node
class Test(Command):
    p: StateSet

    def __str__(self) -> str:
        return f"⌐{sorted(self.p)}⌐"


@_node
class Pgm(Command):
    r: StateRel

    def __str__(self) -> str:
        return f"π({len(self.r)})"


@_node
class Env(Command):
    r: StateRel

    def __str__(self) -> str:
        return f"ε({len(self.r)})"


@_node
class Choice(Command):
    branches: tuple

    def __str__(self) -> str:
        return "(" + " ∨ ".join(str(b) for b in self.branches) + ")"


@_node
class Seq(Command):
    first: Command
    second: Command

    def __str__(self) -> str:
        return f"({self.first} ; {self.second})"


@_node
class Par(Command):
    left: Command
    right: Command

    def __str__(self) -> str:
        return f"({self.left} ∥ {self.right})"


@_node
class Conj(Command):
    left: Command
    right: Command

    def __str__(self) -> str:
        return f"({self.left} ⋒ {self.right})"


@_node
class Mu(Command):
    binder: str
    body: Command

    def __str__(self) -> str:
        return f"μ{self.binder}.{self.body}"


@_node
class Nu(Command):
    binder: str
    body: Command

    def __str__(self) -> str:
        return f"ν{self.binder}.{self.body}"


@_node
class Var(Command):
    binder: str

    def __str__(self) -> str:
        return self.binder


BOT = Bot()
TOP = Top()

PRIMITIVES = (Bot, Top, Test, Pgm, Env, Choice, Seq, Par, Conj, Mu, Nu, Var)


def _free_vars(c: Command) -> frozenset:
    if isinstance(c, Var):
        return frozenset((c.binder,))
    if isinstance(c, (Mu, Nu)):
        return c.body.free_vars - {c.binder}
    if isinstance(c, Choice):
        out = frozenset()
        for b in c.branches:
            out |= b.free_vars
        return out
    if isinstance(c, Seq):
        return c.first.free_vars | c.second.free_vars
    if isinstance(c, (Par, Conj)):
        return c.left.free_vars | c.right.free_vars
    return frozenset()


def subcommands(c: Command) -> tuple:
    if isinstance(c, Choice):
        return c.branches
    if isinstance(c, Seq):
        return (c.first, c.second)
    if isinstance(c, (Par, Conj)):
        return (c.left, c.right)
    if isinstance(c, (Mu, Nu)):
        return (c.body,)
    return ()


def is_primitive(c: Command) -> bool:
    return isinstance(c, PRIMITIVES) and all(is_primitive(s) for s in subcommands(c))


def size(c: Command) -> int:
    return 1 + sum(size(s) for s in subcommands(c))


def fresh_binder(stem: str, *avoid: Command) -> str:
    taken = frozenset().union(*(c.free_vars for c in avoid)) if avoid else frozenset()
    n = 0
    while f"{stem}{n}" in taken:
        n += 1
    return f"{stem}{n}"


def substitute(c: Command, binder: str, value: Command) -> Command:
    """Capture-avoiding substitution of ``value`` for free ``Var(binder)``."""
    if binder not in c.free_vars:
        return c
    if isinstance(c, Var):
        return value
    if isinstance(c, Choice):
        return Choice(tuple(substitute(b, binder, value) for b in c.branches))
    if isinstance(c, Seq):
        return Seq(substitute(c.first, binder, value), substitute(c.second, binder, value))
    if isinstance(c, (Par, Conj)):
        return type(c)(substitute(c.left, binder, value), substitute(c.right, binder, value))
    if isinstance(c, (Mu, Nu)):
        body, b = c.body, c.binder
        if b in value.free_vars:
            nb = fresh_binder(b, value, body)
            body = substitute(body, b, Var(nb))
            b = nb
        return type(c)(b, substitute(body, binder, value))
    raise TypeError(f"not a command: {c!r}")


# smart constructors; only semantics-preserving simplifications


def choice(*cs: Command) -> Command:
    flat: list[Command] = []
    seen = set()
    for c in cs:
        parts = c.branches if isinstance(c, Choice) else (c,)
        for p in parts:
            if isinstance(p, Bot) or p in seen:
                continue
            seen.add(p)
            flat.append(p)
    if not flat:
        return BOT
    if len(flat) == 1:
        return flat[0]
    return Choice(tuple(flat))


def seq(*cs: Command) -> Command:
    if not cs:
        raise ValueError("seq needs at least one command")
    out = cs[-1]
    for c in reversed(cs[:-1]):
        out = BOT if isinstance(c, Bot) else Seq(c, out)
    return out


def par(c: Command, d: Command) -> Command:
    return Par(c, d)


def conj(*cs: Command) -> Command:
    out = cs[-1]
    for c in reversed(cs[:-1]):
        out = Conj(c, out)
    return out


# -- derived commands --------------------------------------------------------


def _iter(space: StateSpace, c: Command, binder_cls) -> Command:
    x = fresh_binder("i", c)
    return binder_cls(x, Choice((nil(space), Seq(c, Var(x)))))


@functools.lru_cache(maxsize=None)
def nil(space: StateSpace) -> Command:
    return Test(space.all)


def fin(space: StateSpace, c: Command) -> Command:
    """Finite iteration: least fixed point of ``λx. nil ∨ c ; x``."""
    return _iter(space, c, Mu)


def om(space: StateSpace, c: Command) -> Command:
    """Possibly infinite iteration: greatest fixed point of ``λx. nil ∨ c ; x``."""
    return _iter(space, c, Nu)


def assert_(space: StateSpace, p: StateSet) -> Command:
    return Choice((nil(space), Seq(Test(space.complement(p)), TOP)))


def assert_alt(space: StateSpace, p: StateSet) -> Command:
    return Choice((Test(frozenset(p)), Seq(Test(space.complement(p)), TOP)))


@functools.lru_cache(maxsize=None)
def alpha(space: StateSpace) -> Command:
    return Choice((Pgm(space.univ), Env(space.univ)))


@functools.lru_cache(maxsize=None)
def guar(space: StateSpace, g: StateRel) -> Command:
    return om(space, Choice((Pgm(frozenset(g)), Env(space.univ))))


@functools.lru_cache(maxsize=None)
def rely(space: StateSpace, r: StateRel) -> Command:
    bad = Env(space.complement_rel(r))
    return om(space, Choice((Pgm(space.univ), Env(space.univ), Seq(bad, TOP))))


@functools.lru_cache(maxsize=None)
def term(space: StateSpace) -> Command:
    return Seq(fin(space, alpha(space)), om(space, Env(space.univ)))


@functools.lru_cache(maxsize=None)
def idle(space: StateSpace) -> Command:
    return Conj(guar(space, space.identity), term(space))


def frame(space: StateSpace, lvs: Iterable[LValue | str], c: Command) -> Command:
    keep = [lv for lv in space.lvalues if lv not in {space.lvalue(v) for v in lvs}]
    return Conj(guar(space, identity_on(space, keep)), c)


def opt(space: StateSpace, r: StateRel) -> Command:
    stay = frozenset(a for a, b in r if a == b)
    return Choice((Pgm(frozenset(r)), Test(stay)))


def atomic_spec(space: StateSpace, r: StateRel) -> Command:
    return seq(idle(space), opt(space, r), idle(space))


@functools.lru_cache(maxsize=None)
def post_spec(space: StateSpace, q: StateRel) -> Command:
    posts: dict[int, set[int]] = {}
    for a, b in q:
        posts.setdefault(a, set()).add(b)
    t = term(space)
    return Choice(
        tuple(
            seq(Test(frozenset({s})), t, Test(frozenset(posts.get(s, ()))))
            for s in range(space.size)
        )
    )


@functools.lru_cache(maxsize=None)
def fair(space: StateSpace) -> Command:
    eps = Env(space.univ)
    return Seq(om(space, Seq(fin(space, eps), Pgm(space.univ))), fin(space, eps))


def any_steps(space: StateSpace) -> Command:
    """Finite iteration of any single step."""
    return fin(space, alpha(space))


# -- expressions -------------------------------------------------------------


@_node
class Const:
    value: Value

    def __str__(self) -> str:
        return str(self.value)


@_node
class Variable:
    name: str

    def __str__(self) -> str:
        return self.name


@_node
class ArrayIndex:
    array: "LvExpr"
    index: "Expr"

    def __str__(self) -> str:
        return f"{self.array}[{self.index}]"


@_node
class Deref:
    lve: "LvExpr"

    def __str__(self) -> str:
        return f"*{self.lve}"


@_node
class Unary:
    op: str
    operand: "Expr"

    def __str__(self) -> str:
        return f"({self.op} {self.operand})"


@_node
class Binary:
    left: "Expr"
    op: str
    right: "Expr"

    def __str__(self) -> str:
        return f"({self.left} {self.op} {self.right})"


Expr = Const | Deref | Unary | Binary
LvExpr = Variable | ArrayIndex


def deref(name: str) -> Deref:
    return Deref(Variable(name))


def const(v) -> Const:
    from .state_model import to_value

    return Const(to_value(v))


UNARY_OPS = ("not", "neg")
BINARY_OPS = (
    "and", "or", "=", "!=", "in", "notin",
    "+", "-", "<", "<=", "union", "inter", "subseteq", "subset",
)


def apply_unary(op: str, v: Value) -> Value | None:
    if op == "not":
        return Bool(not v.value) if isinstance(v, Bool) else None
    if op == "neg":
        return Int(-v.value) if isinstance(v, Int) else None
    raise ValueError(f"unknown unary operator {op!r}")


def apply_binary(op: str, a: Value, b: Value) -> Value | None:
    """Operator semantics on values; ``None`` for ill-typed operands."""
    if op in ("=", "!="):
        return Bool((a == b) == (op == "="))
    if op in ("and", "or"):
        if isinstance(a, Bool) and isinstance(b, Bool):
            return Bool(a.value and b.value if op == "and" else a.value or b.value)
        return None
    if op in ("in", "notin"):
        if isinstance(a, Int) and isinstance(b, FinSet):
            return Bool((a.value in b.items) == (op == "in"))
        return None
    if isinstance(a, Int) and isinstance(b, Int):
        if op == "+":
            return Int(a.value + b.value)
        if op == "-":
            return Int(a.value - b.value)
        if op == "<":
            return Bool(a.value < b.value)
        if op == "<=":
            return Bool(a.value <= b.value)
        return None
    if isinstance(a, FinSet) and isinstance(b, FinSet):
        if op == "-":
            return FinSet(a.items - b.items)
        if op == "union":
            return FinSet(a.items | b.items)
        if op == "inter":
            return FinSet(a.items & b.items)
        if op == "subseteq":
            return Bool(a.items <= b.items)
        if op == "subset":
            return Bool(a.items < b.items)
        return None
    if op not in BINARY_OPS:
        raise ValueError(f"unknown binary operator {op!r}")
    return None


def evaluate_lv(space: StateSpace, lve, i: int) -> LValue | None:
    """Atomic l-value evaluation in state ``i``."""
    if isinstance(lve, Variable):
        return Base(lve.name)
    a = evaluate_lv(space, lve.array, i)
    k = evaluate(space, lve.index, i)
    if a is None or k is None:
        return None
    return Indexed(a, k)


def evaluate(space: StateSpace, e, i: int) -> Value | None:
    """Atomic (single-state) evaluation; ``None`` when undefined."""
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Deref):
        lv = evaluate_lv(space, e.lve, i)
        if lv is None or not space.has(lv):
            return None
        return space.states[i][space.slot(lv)]
    if isinstance(e, Unary):
        v = evaluate(space, e.operand, i)
        return None if v is None else apply_unary(e.op, v)
    if isinstance(e, Binary):
        a = evaluate(space, e.left, i)
        b = evaluate(space, e.right, i)
        return None if a is None or b is None else apply_binary(e.op, a, b)
    raise TypeError(f"not an expression: {e!r}")


@functools.lru_cache(maxsize=None)
def expr_values(space: StateSpace, e) -> tuple[Value, ...]:
    """Every value ``e`` can produce when its reads may see different states.

    Closed over the declared domains, the expression's constants and whatever
    its operators compute from them, so intermediate results need not be
    storable in any variable.
    """
    if isinstance(e, Const):
        vals = {e.value}
    elif isinstance(e, Deref):
        vals = {v for lv in space.lvalues for v in space.domains[lv]}
    elif isinstance(e, Unary):
        vals = {apply_unary(e.op, v) for v in expr_values(space, e.operand)} - {None}
    elif isinstance(e, Binary):
        vals = {
            apply_binary(e.op, a, b)
            for a in expr_values(space, e.left)
            for b in expr_values(space, e.right)
        } - {None}
    else:
        raise TypeError(f"not an expression: {e!r}")
    return tuple(sorted(vals, key=value_key))


@functools.lru_cache(maxsize=None)
def eval_lvexpr(space: StateSpace, lve, lv: LValue) -> Command:
    """Fine-grained evaluation of ``lve`` to the l-value ``lv``."""
    if isinstance(lve, Variable):
        return idle(space) if lv == Base(lve.name) else BOT
    if isinstance(lv, Base):
        return BOT
    a = eval_lvexpr(space, lve.array, lv.array)
    k = eval_expr(space, lve.index, lv.index)
    if isinstance(a, Bot) or isinstance(k, Bot):
        return BOT
    return Par(a, k)


@functools.lru_cache(maxsize=None)
def eval_expr(space: StateSpace, e, k: Value) -> Command:
    """Fine-grained evaluation of ``e`` to ``k`` under interference.

    Sub-evaluations that are syntactically ``Bot`` are dropped from the big
    choices; evaluation commands never abort, so such branches denote ``Bot``.
    """
    if isinstance(e, Const):
        return idle(space) if e.value == k else BOT
    if isinstance(e, Unary):
        return choice(
            *(
                eval_expr(space, e.operand, k1)
                for k1 in expr_values(space, e.operand)
                if apply_unary(e.op, k1) == k
            )
        )
    if isinstance(e, Binary):
        branches = []
        for k1 in expr_values(space, e.left):
            c1 = eval_expr(space, e.left, k1)
            if isinstance(c1, Bot):
                continue
            for k2 in expr_values(space, e.right):
                if apply_binary(e.op, k1, k2) != k:
                    continue
                c2 = eval_expr(space, e.right, k2)
                if isinstance(c2, Bot):
                    continue
                branches.append(Par(c1, c2))
        return choice(*branches)
    if isinstance(e, Deref):
        branches = []
        for lv in space.lvalues:
            c = eval_lvexpr(space, e.lve, lv)
            if isinstance(c, Bot):
                continue
            slot = space.slot(lv)
            holds = frozenset(i for i, s in enumerate(space.states) if s[slot] == k)
            branches.append(seq(c, Test(holds), idle(space)))
        return choice(*branches)
    raise TypeError(f"not an expression: {e!r}")


def conditional(space: StateSpace, b, c: Command, d: Command) -> Command:
    branches = [seq(eval_expr(space, b, TRUE), c), seq(eval_expr(space, b, FALSE), d)]
    for k in expr_values(space, b):
        if k in BOOLEANS:
            continue
        ev = eval_expr(space, b, k)
        if not isinstance(ev, Bot):
            branches.append(Seq(ev, TOP))
    return choice(*branches)


def while_body(space: StateSpace, b, c: Command, binder: str) -> Command:
    """Body of the loop's fixed point: ``if b then c ; x else nil fi``."""
    return conditional(space, b, Seq(c, Var(binder)), nil(space))


def while_loop(space: StateSpace, b, c: Command) -> Command:
    x = fresh_binder("w", c)
    return Nu(x, while_body(space, b, c, x))


def write_rel(space: StateSpace, lv: LValue, k: Value) -> StateRel:
    """Atomic update of ``lv`` to ``k`` leaving every other l-value unchanged."""
    out = set()
    for i in range(space.size):
        j = space.update(i, lv, k)
        if j is not None:
            out.add((i, j))
    return frozenset(out)


def assignment(space: StateSpace, lv: LValue | str, e) -> Command:
    """``lv := e``: fine-grained read of ``e`` then one atomic write."""
    lv = space.lvalue(lv)
    return choice(
        *(
            seq(eval_expr(space, e, k), frame(space, [lv], opt(space, write_rel(space, lv, k))))
            for k in space.domains[lv]
        )
    )


def cas(space: StateSpace, lv: LValue | str, old, new) -> Command:
    """Compare-and-swap on ``lv``; ``old``/``new`` are evaluated atomically."""
    lv = space.lvalue(lv)
    slot = space.slot(lv)
    r = set()
    for i in range(space.size):
        cur = space.states[i][slot]
        o, n = evaluate(space, old, i), evaluate(space, new, i)
        for j in range(space.size):
            nxt = space.states[j][slot]
            if (cur == o and nxt == n) or (cur != o and nxt == cur):
                r.add((i, j))
    return frame(space, [lv], atomic_spec(space, frozenset(r)))


# -- variants ----------------------------------------------------------------


@dataclass(frozen=True)
class VariantSpec:
    """Variant expression with a strict order on its values."""

    expr: object
    order: frozenset  # strict pairs (smaller, larger)
    carrier: tuple

    @classmethod
    def build(
        cls,
        space: StateSpace,
        expr,
        less: Callable[[Value, Value], bool],
        extra: Iterable[Value] = (),
    ) -> "VariantSpec":
        vals = {evaluate(space, expr, i) for i in range(space.size)}
        if None in vals:
            raise ValueError(f"variant {expr} undefined in some state")
        vals.update(extra)
        carrier = tuple(sorted(vals, key=value_key))
        order = frozenset((a, b) for a in carrier for b in carrier if less(a, b))
        return cls(expr, order, carrier)

    @classmethod
    def subset_order(cls, space: StateSpace, expr) -> "VariantSpec":
        return cls.build(space, expr, lambda a, b: a.items < b.items)

    @classmethod
    def less_than(cls, space: StateSpace, expr) -> "VariantSpec":
        return cls.build(space, expr, lambda a, b: a.value < b.value)

    def lt(self, a: Value, b: Value) -> bool:
        return (a, b) in self.order

    def le(self, a: Value, b: Value) -> bool:
        return a == b or (a, b) in self.order

    def well_founded(self) -> bool:
        return is_well_founded(self.carrier, self.order)

    def transitive(self) -> bool:
        return is_transitive(self.order)

    def values(self, space: StateSpace) -> list:
        return [evaluate(space, self.expr, i) for i in range(space.size)]

    def eq_set(self, space: StateSpace, k: Value) -> StateSet:
        return frozenset(i for i, v in enumerate(self.values(space)) if v == k)

    def lt_set(self, space: StateSpace, k: Value) -> StateSet:
        return frozenset(i for i, v in enumerate(self.values(space)) if self.lt(v, k))

    def le_set(self, space: StateSpace, k: Value) -> StateSet:
        return frozenset(i for i, v in enumerate(self.values(space)) if self.le(v, k))

    def non_increasing_rel(self, space: StateSpace) -> StateRel:
        vals = self.values(space)
        return frozenset(
            (a, b) for a in range(space.size) for b in range(space.size) if self.le(vals[b], vals[a])
        )
