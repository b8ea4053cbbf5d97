"""Turn a parsed script into a state space, sets, relations and commands."""
from __future__ import annotations

import itertools

from ..language import (
    BOT, TOP, ArrayIndex, Binary, Choice, Command, Conj, Const, Deref, Env, Mu, Nu, Par, Pgm,
    Seq, Test, Unary, Var, Variable, apply_binary, apply_unary, assert_, assignment,
    atomic_spec, cas, conditional, eval_expr, fair, fin, frame, guar, idle, nil, om, opt,
    post_spec, rely, term, while_loop,
)
from ..state_model import (
    BOOLEANS, TRUE, Base, Bool, FinSet, Indexed, Int, StateSpace, Value, bool_domain,
    int_domain, subsets_domain,
)
from .ast import (
    ArgList, ArgName, CAssign, CAtom, CBin, CCas, CEval, CFix, CFrame, CIf, CIter,
    CName, CPred, CWhile, DeclArr, DeclDef, DeclVar, DomBool, DomPowerset, DomRange,
    DomValues, EBinary, EBool, EDeref, EName, ENum, ESet, EUnary, Script,
)
from .lexer import ScriptError


def literal_value(e) -> Value:
    if isinstance(e, ENum):
        return Int(e.value)
    if isinstance(e, EBool):
        return Bool(e.value)
    if isinstance(e, ESet):
        return FinSet(frozenset(e.items))
    raise TypeError(e)


def domain_values(d) -> tuple:
    if isinstance(d, DomBool):
        return bool_domain()
    if isinstance(d, DomRange):
        if d.hi < d.lo:
            raise ScriptError(f"empty range {d.lo}..{d.hi}")
        return int_domain(range(d.lo, d.hi + 1))
    if isinstance(d, DomValues):
        if not d.values:
            raise ScriptError("empty domain")
        return tuple(dict.fromkeys(literal_value(v) for v in d.values))
    if isinstance(d, DomPowerset):
        base = domain_values(d.base)
        if not all(isinstance(v, Int) for v in base):
            raise ScriptError("powerset needs an integer domain")
        return subsets_domain(v.value for v in base)
    raise TypeError(d)


class Elaborator:
    def __init__(self, script: Script, source: str | None = None):
        self.source = source
        self.vars: set[str] = set()
        self.arrays: dict[str, tuple] = {}
        self.sets: dict[str, frozenset] = {}
        self.rels: dict[str, frozenset] = {}
        self.cmds: dict[str, Command] = {}
        decl = []
        for d in script.decls:
            if isinstance(d, DeclVar):
                self._fresh(d.name, d.pos)
                self.vars.add(d.name)
                decl.append((Base(d.name), domain_values(d.domain)))
            elif isinstance(d, DeclArr):
                self._fresh(d.name, d.pos)
                idx = domain_values(d.index)
                self.arrays[d.name] = idx
                dom = domain_values(d.domain)
                decl.extend((Indexed(Base(d.name), k), dom) for k in idx)
        if not decl:
            raise ScriptError("script declares no variables")
        try:
            self.space = StateSpace(decl)
        except ValueError as exc:
            raise ScriptError(str(exc)) from None
        for d in script.decls:
            if not isinstance(d, DeclDef):
                continue
            self._fresh(d.name, d.pos)
            if d.sort == "set":
                self.sets[d.name] = self.state_set(d.body)
            elif d.sort == "rel":
                self.rels[d.name] = self.relation(d.body)
            else:
                self.cmds[d.name] = self.command(d.body)

    # -- helpers ------------------------------------------------------------------

    def err(self, msg: str, node=None) -> ScriptError:
        line, col = getattr(node, "pos", (0, 0)) if node is not None else (0, 0)
        return ScriptError(msg, line, col, source=self.source)

    def _fresh(self, name, pos):
        if any(name in ns for ns in (self.vars, self.arrays, self.sets, self.rels, self.cmds)):
            raise ScriptError(f"name {name!r} declared twice", *pos, source=self.source)

    # -- predicates ------------------------------------------------------------------

    def _lvalue(self, e: EName, value_of) -> Base | Indexed:
        if e.name in self.vars:
            if e.index is not None:
                raise self.err(f"{e.name} is not an array", e)
            return Base(e.name)
        if e.name in self.arrays:
            if e.index is None:
                raise self.err(f"array {e.name} needs an index", e)
            lv = Indexed(Base(e.name), value_of(e.index))
            if not self.space.has(lv):
                raise self.err(f"index out of range in {lv}", e)
            return lv
        raise self.err(f"unknown name {e.name!r}", e)

    def pred_value(self, e, a: int, b: int | None) -> Value:
        """Value of a predicate expression in pre-state ``a`` (and post-state ``b``)."""
        def ev(x):
            return self.pred_value(x, a, b)

        if isinstance(e, (ENum, EBool, ESet)):
            return literal_value(e)
        if isinstance(e, EDeref):
            return ev(e.target)
        if isinstance(e, EName):
            if e.primed and b is None:
                raise self.err(f"primed name {e.name}' in a state predicate", e)
            here = b if e.primed else a
            if e.name in self.sets and e.index is None:
                return Bool(here in self.sets[e.name])
            if e.name in self.rels and e.index is None:
                if b is None or e.primed:
                    raise self.err(f"relation {e.name} used outside a relation", e)
                return Bool((a, b) in self.rels[e.name])
            lv = self._lvalue(e, ev)
            return self.space.states[here][self.space.slot(lv)]
        if isinstance(e, EUnary):
            v = apply_unary("not" if e.op == "not" else "neg", ev(e.operand))
        elif isinstance(e, EBinary):
            left, right = ev(e.left), ev(e.right)
            if e.op in (">", ">="):
                v = apply_binary("<" if e.op == ">" else "<=", right, left)
            else:
                v = apply_binary(e.op, left, right)
        else:
            raise TypeError(e)
        if v is None:
            raise self.err("ill-typed operands", e)
        return v

    def _truth(self, e, a, b) -> bool:
        v = self.pred_value(e, a, b)
        if v not in BOOLEANS:
            raise self.err(f"predicate yields {v}, not a boolean", e)
        return v == TRUE

    def state_set(self, e) -> frozenset:
        return frozenset(i for i in range(self.space.size) if self._truth(e, i, None))

    def relation(self, e) -> frozenset:
        n = self.space.size
        return frozenset((a, b) for a, b in itertools.product(range(n), repeat=2)
                         if self._truth(e, a, b))

    def set_arg(self, a) -> frozenset:
        if isinstance(a, ArgName):
            if a.name in self.sets:
                return self.sets[a.name]
            raise self.err(f"unknown set {a.name!r}", a)
        return self.state_set(a.pred)

    def rel_arg(self, a) -> frozenset:
        if isinstance(a, ArgName):
            if a.name == "univ":
                return self.space.univ
            if a.name == "id":
                return self.space.identity
            if a.name in self.rels:
                return self.rels[a.name]
            raise self.err(f"unknown relation {a.name!r}", a)
        return self.relation(a.pred)

    def family_arg(self, a: ArgList) -> tuple:
        return tuple(self.set_arg(x) for x in a.items)

    # -- program expressions --------------------------------------------------------

    def _lvexpr(self, e: EName):
        if e.primed:
            raise self.err("primed names are not allowed in program expressions", e)
        if e.name in self.vars and e.index is None:
            return Variable(e.name)
        if e.name in self.arrays and e.index is not None:
            return ArrayIndex(Variable(e.name), self.expr(e.index))
        if e.name in self.vars or e.name in self.arrays:
            raise self.err(f"bad use of {e.name}", e)
        raise self.err(f"unknown variable {e.name!r}", e)

    def expr(self, e):
        if isinstance(e, (ENum, EBool, ESet)):
            return Const(literal_value(e))
        if isinstance(e, EDeref):
            return Deref(self._lvexpr(e.target))
        if isinstance(e, EName):
            return Deref(self._lvexpr(e))
        if isinstance(e, EUnary):
            return Unary("not" if e.op == "not" else "neg", self.expr(e.operand))
        if isinstance(e, EBinary):
            if e.op in (">", ">="):
                return Binary(self.expr(e.right), "<" if e.op == ">" else "<=", self.expr(e.left))
            return Binary(self.expr(e.left), e.op, self.expr(e.right))
        raise TypeError(e)

    def target(self, e: EName):
        """Static l-value for assignment and CAS targets."""
        if e.primed:
            raise self.err("assignment target cannot be primed", e)

        def const_index(x):
            if not isinstance(x, (ENum, EBool, ESet)):
                raise self.err("assignment targets need a constant index", x)
            return literal_value(x)

        return self._lvalue(e, const_index)

    # -- commands ------------------------------------------------------------------

    def command(self, c, bound: frozenset = frozenset()) -> Command:
        sp = self.space

        def sub(x):
            return self.command(x, bound)

        if isinstance(c, CAtom):
            return {
                "bot": lambda: BOT, "top": lambda: TOP, "nil": lambda: nil(sp),
                "term": lambda: term(sp), "idle": lambda: idle(sp), "fair": lambda: fair(sp),
            }[c.kind]()
        if isinstance(c, CName):
            if c.name in bound:
                return Var(c.name)
            if c.name in self.cmds:
                return self.cmds[c.name]
            raise self.err(f"unknown command {c.name!r}", c)
        if isinstance(c, CPred):
            named = isinstance(c.pred, ArgName)
            if c.kind in ("test", "assert"):
                p = self.set_arg(c.pred) if named else self.state_set(c.pred)
                return Test(p) if c.kind == "test" else assert_(sp, p)
            r = self.rel_arg(c.pred) if named else self.relation(c.pred)
            return {
                "pgm": Pgm, "env": Env, "guar": lambda x: guar(sp, x),
                "rely": lambda x: rely(sp, x), "post": lambda x: post_spec(sp, x),
                "atomic": lambda x: atomic_spec(sp, x), "opt": lambda x: opt(sp, x),
            }[c.kind](r)
        if isinstance(c, CFrame):
            lvs = []
            for name in c.names:
                if name in self.vars:
                    lvs.append(Base(name))
                elif name in self.arrays:
                    lvs.extend(Indexed(Base(name), k) for k in self.arrays[name])
                else:
                    raise self.err(f"unknown variable {name!r} in frame", c)
            return frame(sp, lvs, sub(c.body))
        if isinstance(c, CBin):
            left, right = sub(c.left), sub(c.right)
            return {";": Seq, "||": Par, "/\\": Conj}.get(c.op, lambda a, b: Choice((a, b)))(
                left, right)
        if isinstance(c, CIter):
            return (fin if c.kind == "fin" else om)(sp, sub(c.body))
        if isinstance(c, CFix):
            body = self.command(c.body, bound | {c.binder})
            return (Mu if c.kind == "mu" else Nu)(c.binder, body)
        if isinstance(c, CIf):
            return conditional(sp, self.expr(c.guard), sub(c.then), sub(c.orelse))
        if isinstance(c, CWhile):
            return while_loop(sp, self.expr(c.guard), sub(c.body))
        if isinstance(c, CEval):
            return eval_expr(sp, self.expr(c.expr), literal_value(c.value))
        if isinstance(c, CAssign):
            return assignment(sp, self.target(c.target), self.expr(c.expr))
        if isinstance(c, CCas):
            return cas(sp, self.target(c.target), self.expr(c.old), self.expr(c.new))
        raise TypeError(f"not a command node: {c!r}")


def elaborate(script: Script, source: str | None = None) -> Elaborator:
    return Elaborator(script, source)


__all__ = ["Elaborator", "domain_values", "elaborate", "literal_value"]