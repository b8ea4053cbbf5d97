"""Pretty-printer producing text that parses back to the same tree."""
from __future__ import annotations

from .ast import (
    ArgList, ArgName, CAssign, CAtom, CBin, CCas, CEval, CFix, CFrame, CIf, CIter,
    CName, CPred, CWhile, DeclArr, DeclDef, DeclVar, DomBool, DomPowerset, DomRange,
    DomValues, EBinary, EBool, EDeref, EName, ENum, ESet, EUnary, Goal, Script,
)
from .parser import GOAL_BINDINGS, law_sorts


def show_expr(e, angle: bool = False) -> str:
    text = _expr(e)
    if angle and isinstance(e, EBinary) and e.op in (">", ">="):
        return f"({text})"
    return text


def _sub(e) -> str:
    return f"({_expr(e)})" if isinstance(e, (EBinary, EUnary)) else _expr(e)


def _expr(e) -> str:
    if isinstance(e, ENum):
        return str(e.value)
    if isinstance(e, EBool):
        return "true" if e.value else "false"
    if isinstance(e, ESet):
        return "{" + ", ".join(map(str, e.items)) + "}"
    if isinstance(e, EName):
        out = e.name + ("'" if e.primed else "")
        if e.index is not None:
            out += f"[{_expr(e.index)}]"
        return out
    if isinstance(e, EDeref):
        return "*" + _expr(e.target)
    if isinstance(e, EUnary):
        return f"not {_sub(e.operand)}" if e.op == "not" else f"-({_expr(e.operand)})"
    if isinstance(e, EBinary):
        return f"{_sub(e.left)} {e.op} {_sub(e.right)}"
    raise TypeError(f"not an expression node: {e!r}")


def show_domain(d) -> str:
    if isinstance(d, DomBool):
        return "bool"
    if isinstance(d, DomRange):
        return f"{d.lo}..{d.hi}"
    if isinstance(d, DomValues):
        return "{" + ", ".join(_expr(v) for v in d.values) + "}"
    if isinstance(d, DomPowerset):
        return "powerset " + show_domain(d.base)
    raise TypeError(d)


def _set_arg(a) -> str:
    return a.name if isinstance(a, ArgName) else "{" + show_expr(a.pred) + "}"


def _rel_arg(a) -> str:
    return a.name if isinstance(a, ArgName) else "<" + show_expr(a.pred, angle=True) + ">"


def _csub(c) -> str:
    text = show_command(c)
    return f"({text})" if isinstance(c, (CBin, CFrame, CFix)) else text


def show_command(c) -> str:
    if isinstance(c, CAtom):
        return c.kind
    if isinstance(c, CName):
        return c.name
    if isinstance(c, CPred):
        if isinstance(c.pred, ArgName):
            return f"{c.kind} {c.pred.name}"
        if c.kind == "assert":
            return "assert{" + show_expr(c.pred) + "}"
        if c.kind in ("post", "atomic", "opt"):
            return f"{c.kind}[{show_expr(c.pred)}]"
        return f"{c.kind}<{show_expr(c.pred, angle=True)}>"
    if isinstance(c, CFrame):
        return ", ".join(c.names) + " : " + _csub(c.body)
    if isinstance(c, CBin):
        return f"{_csub(c.left)} {c.op} {_csub(c.right)}"
    if isinstance(c, CIter):
        return f"{c.kind}({show_command(c.body)})"
    if isinstance(c, CFix):
        return f"{c.kind} {c.binder}. {_csub(c.body)}"
    if isinstance(c, CIf):
        return (f"if {show_expr(c.guard)} then {show_command(c.then)} "
                f"else {show_command(c.orelse)} fi")
    if isinstance(c, CWhile):
        return f"while {show_expr(c.guard)} do {show_command(c.body)} od"
    if isinstance(c, CEval):
        return f"[{show_expr(c.expr)} -> {_expr(c.value)}]"
    if isinstance(c, CAssign):
        return f"{_expr(c.target)} := {show_expr(c.expr)}"
    if isinstance(c, CCas):
        return f"cas({_expr(c.target)}, {show_expr(c.old)}, {show_expr(c.new)})"
    raise TypeError(f"not a command node: {c!r}")


def _arg(sort: str, v) -> str:
    if sort == "set":
        return _set_arg(v)
    if sort == "rel":
        return _rel_arg(v)
    if sort == "cmd":
        return show_command(v)
    if sort == "family":
        assert isinstance(v, ArgList)
        return "[" + ", ".join(_set_arg(a) for a in v.items) + "]"
    if sort == "expr":
        return show_expr(v)
    if sort == "domain":
        return show_domain(v)
    return str(v)  # word, int


def show_goal(g: Goal) -> str:
    parts = ["check"]
    if g.label:
        parts.append(g.label + ":")
    parts.append(g.kind)
    a = g.args
    if g.kind == "refine":
        parts += [show_command(a[0]), ">=", show_command(a[1])]
    elif g.kind == "equal":
        parts += [show_command(a[0]), "==", show_command(a[1])]
    elif g.kind == "triple":
        parts += [_set_arg(a[0]), show_command(a[1]), _set_arg(a[2])]
    elif g.kind == "establish":
        parts += [_set_arg(a[0]), "under", _rel_arg(a[1]),
                  f"[{show_expr(a[2])} -> {_expr(a[3])}]", _set_arg(a[4])]
    elif g.kind == "stable":
        parts += [_set_arg(a[0]), "under", _rel_arg(a[1])]
    elif g.kind == "tolerates":
        parts += [_rel_arg(a[0]), "under", _rel_arg(a[1]), "from", _set_arg(a[2])]
    elif g.kind == "guarantee":
        parts += [show_command(a[0]), "within", _rel_arg(a[1])]
    elif g.kind == "law":
        parts.append(a[0])
    if g.bindings:
        sorts = law_sorts(a[0]) if g.kind == "law" else GOAL_BINDINGS[g.kind]
        parts.append("with")
        parts.append(", ".join(f"{n} = {_arg(sorts[n], v)}" for n, v in g.bindings))
    if g.depth is not None:
        parts.append(f"depth {g.depth}")
    if g.engine is not None:
        parts.append(f"engine {g.engine}")
    if g.samples is not None:
        parts.append(f"samples {g.samples}")
    if g.expect != "holds":
        parts.append(f"expect {g.expect}")
    return " ".join(parts) + ";"


def show_decl(d) -> str:
    if isinstance(d, DeclVar):
        return f"var {d.name} in {show_domain(d.domain)};"
    if isinstance(d, DeclArr):
        return f"arr {d.name}[{show_domain(d.index)}] in {show_domain(d.domain)};"
    if isinstance(d, DeclDef):
        body = show_command(d.body) if d.sort == "cmd" else show_expr(d.body)
        return f"{d.sort} {d.name} := {body};"
    raise TypeError(d)


def show_script(s: Script) -> str:
    return "\n".join([show_decl(d) for d in s.decls] + [show_goal(g) for g in s.goals]) + "\n"
