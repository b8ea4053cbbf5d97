"""Syntax trees for check scripts.

Nodes are frozen dataclasses so that parse results compare structurally;
source positions are carried but excluded from equality.
"""
from __future__ import annotations

from dataclasses import dataclass, field

Pos = tuple  # (line, col)


def _pos():
    return field(default=(0, 0), compare=False, repr=False)


# -- expressions and predicates -------------------------------------------------


@dataclass(frozen=True)
class ENum:
    value: int
    pos: Pos = _pos()


@dataclass(frozen=True)
class EBool:
    value: bool
    pos: Pos = _pos()


@dataclass(frozen=True)
class ESet:
    items: tuple  # of int
    pos: Pos = _pos()


@dataclass(frozen=True)
class EName:
    name: str
    primed: bool = False
    index: object = None  # expression for array elements
    pos: Pos = _pos()


@dataclass(frozen=True)
class EDeref:
    target: EName
    pos: Pos = _pos()


@dataclass(frozen=True)
class EUnary:
    op: str  # "not" or "-"
    operand: object
    pos: Pos = _pos()


@dataclass(frozen=True)
class EBinary:
    op: str
    left: object
    right: object
    pos: Pos = _pos()


LITERALS = (ENum, EBool, ESet)


# -- domains ----------------------------------------------------------------------


@dataclass(frozen=True)
class DomValues:
    values: tuple  # literal expressions


@dataclass(frozen=True)
class DomRange:
    lo: int
    hi: int


@dataclass(frozen=True)
class DomBool:
    pass


@dataclass(frozen=True)
class DomPowerset:
    base: object  # DomValues or DomRange


# -- set and relation arguments -------------------------------------------------------


@dataclass(frozen=True)
class ArgName:
    name: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class ArgPred:
    pred: object
    pos: Pos = _pos()


@dataclass(frozen=True)
class ArgList:
    items: tuple
    pos: Pos = _pos()


# -- commands -------------------------------------------------------------------------


@dataclass(frozen=True)
class CAtom:
    kind: str  # bot top nil term idle fair
    pos: Pos = _pos()


@dataclass(frozen=True)
class CPred:
    kind: str  # test pgm env guar rely assert post atomic opt
    pred: object
    pos: Pos = _pos()


@dataclass(frozen=True)
class CName:
    name: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class CFrame:
    names: tuple
    body: object
    pos: Pos = _pos()


@dataclass(frozen=True)
class CBin:
    op: str  # ";" "|" "||" "/\"
    left: object
    right: object
    pos: Pos = _pos()


@dataclass(frozen=True)
class CIter:
    kind: str  # fin om
    body: object
    pos: Pos = _pos()


@dataclass(frozen=True)
class CFix:
    kind: str  # mu nu
    binder: str
    body: object
    pos: Pos = _pos()


@dataclass(frozen=True)
class CIf:
    guard: object
    then: object
    orelse: object
    pos: Pos = _pos()


@dataclass(frozen=True)
class CWhile:
    guard: object
    body: object
    pos: Pos = _pos()


@dataclass(frozen=True)
class CEval:
    expr: object
    value: object  # literal
    pos: Pos = _pos()


@dataclass(frozen=True)
class CAssign:
    target: EName
    expr: object
    pos: Pos = _pos()


@dataclass(frozen=True)
class CCas:
    target: EName
    old: object
    new: object
    pos: Pos = _pos()


# -- declarations and goals ----------------------------------------------------------


@dataclass(frozen=True)
class DeclVar:
    name: str
    domain: object
    pos: Pos = _pos()


@dataclass(frozen=True)
class DeclArr:
    name: str
    index: object
    domain: object
    pos: Pos = _pos()


@dataclass(frozen=True)
class DeclDef:
    sort: str  # set rel cmd
    name: str
    body: object
    pos: Pos = _pos()


@dataclass(frozen=True)
class Goal:
    kind: str
    args: tuple  # positional arguments, kind specific
    bindings: tuple = ()  # ((name, value), ...)
    label: str | None = None
    depth: int | None = None
    engine: str | None = None
    expect: str = "holds"  # or "fail"
    samples: int | None = None
    pos: Pos = _pos()


@dataclass(frozen=True)
class Script:
    decls: tuple
    goals: tuple
