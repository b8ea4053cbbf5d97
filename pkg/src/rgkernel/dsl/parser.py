"""Recursive-descent parser for check scripts.

Command operators, loosest first: ``|`` (choice), ``||`` (parallel),
``/\\`` (weak conjunction), ``;`` (sequence), then frames ``x, y : c``.
A ``;`` continues a command only when the next token can start one, so it
doubles as the statement terminator.
"""
from __future__ import annotations

from ..laws.catalogue import CMD, FAMILY, LAWS, REL, SET
from ..laws.sweeps import THEOREMS
from .ast import (
    ArgList, ArgName, ArgPred, CAssign, CAtom, CBin, CCas, CEval, CFix, CFrame, CIf, CIter,
    CName, CPred, CWhile, DeclArr, DeclDef, DeclVar, DomBool, DomPowerset, DomRange,
    DomValues, EBinary, EBool, EDeref, EName, ENum, ESet, EUnary, Goal, Script,
)
from .lexer import ScriptError, Token, tokenize

EXPR, WORD, INT, DOMAIN, LITERAL = "expr", "word", "int", "domain", "literal"

GOAL_BINDINGS = {
    "while-rule": {"b": EXPR, "c": CMD, "r": REL, "q": REL, "p": SET, "pt": SET, "pf": SET,
                   "px": SET, "variant": EXPR, "order": WORD},
    "recursion-rule": {"binder": WORD, "body": CMD, "s": CMD, "px": SET, "variant": EXPR,
                       "order": WORD},
    "remove": {"universe": DOMAIN, "element": INT, "rely": WORD, "guarantee": WORD},
    "fairness": {"universe": DOMAIN, "element": INT},
    "hoare-loop": {"rely": WORD},
}
GOAL_KINDS = ("refine", "equal", "triple", "establish", "stable", "tolerates", "guarantee",
              "law", *GOAL_BINDINGS)

CMD_ATOMS = ("bot", "top", "nil", "term", "idle", "fair")
ANGLE_CMDS = ("test", "pgm", "env", "guar", "rely")
BRACKET_CMDS = ("post", "atomic", "opt")
CMD_START_KW = frozenset(CMD_ATOMS + ANGLE_CMDS + BRACKET_CMDS + (
    "assert", "fin", "om", "mu", "nu", "if", "while", "cas"))
COMPARISONS = ("=", "!=", "<", "<=", ">", ">=", "in", "notin", "subset", "subseteq")
ADDITIVE = ("+", "-", "union", "inter")


def law_sorts(law_id: str) -> dict:
    """Metavariable sorts of a law; theorem sweeps take no bindings."""
    return dict(LAWS[law_id].sorts) if law_id in LAWS else {}


class Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    # -- token helpers --------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, *texts: str) -> bool:
        t = self.tok
        return t.kind in ("kw", "sym") and t.text in texts

    def error(self, msg: str, expected=(), tok: Token | None = None) -> ScriptError:
        t = tok or self.tok
        return ScriptError(msg, t.line, t.col, expected, self.text)

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, *texts: str) -> Token:
        if self.at(*texts):
            return self.advance()
        raise self.error(f"unexpected {self.tok.describe()}", [repr(t) for t in texts])

    def ident(self, what: str = "identifier") -> str:
        if self.tok.kind != "id":
            raise self.error(f"unexpected {self.tok.describe()}", [what])
        return self.advance().text

    def integer(self) -> int:
        neg = False
        if self.at("-"):
            self.advance()
            neg = True
        if self.tok.kind != "int":
            raise self.error(f"unexpected {self.tok.describe()}", ["integer"])
        v = int(self.advance().text)
        return -v if neg else v

    def word(self) -> str:
        """A possibly hyphenated word such as ``seq-nil-left``."""
        if self.tok.kind not in ("id", "kw"):
            raise self.error(f"unexpected {self.tok.describe()}", ["word"])
        parts = [self.advance().text]
        while self.at("-") and self.peek().kind in ("id", "kw") and self._adjacent():
            self.advance()
            parts.append(self.advance().text)
        return "-".join(parts)

    def _adjacent(self) -> bool:
        prev, nxt = self.toks[self.i - 1], self.tok
        after = self.peek()
        return (prev.line == nxt.line == after.line
                and nxt.col == prev.col + len(prev.text) and after.col == nxt.col + 1)

    def pos(self) -> tuple:
        return (self.tok.line, self.tok.col)

    # -- script ------------------------------------------------------------------

    def script(self) -> Script:
        decls, goals = [], []
        while self.tok.kind != "eof":
            if self.at("check"):
                goals.append(self.goal())
            elif self.at("var", "arr", "set", "rel", "cmd"):
                if goals:
                    raise self.error("declarations must precede checks")
                decls.append(self.decl())
            else:
                raise self.error(f"unexpected {self.tok.describe()}",
                                 ["'var'", "'arr'", "'set'", "'rel'", "'cmd'", "'check'"])
        return Script(tuple(decls), tuple(goals))

    def decl(self):
        pos = self.pos()
        kw = self.advance().text
        name = self.ident()
        if kw == "var":
            self.expect("in")
            d = DeclVar(name, self.domain(), pos)
        elif kw == "arr":
            self.expect("[")
            index = self.domain()
            self.expect("]")
            self.expect("in")
            d = DeclArr(name, index, self.domain(), pos)
        else:
            self.expect(":=")
            body = self.command() if kw == "cmd" else self.expr()
            d = DeclDef(kw, name, body, pos)
        self.expect(";")
        return d

    def domain(self):
        if self.at("bool"):
            self.advance()
            return DomBool()
        if self.at("powerset"):
            self.advance()
            return DomPowerset(self.domain())
        if self.at("{"):
            self.advance()
            vals = []
            if not self.at("}"):
                vals.append(self.literal())
                while self.at(","):
                    self.advance()
                    vals.append(self.literal())
            self.expect("}")
            return DomValues(tuple(vals))
        if self.tok.kind == "int" or self.at("-"):
            lo = self.integer()
            self.expect("..")
            return DomRange(lo, self.integer())
        raise self.error(f"unexpected {self.tok.describe()}",
                         ["'{'", "'bool'", "'powerset'", "integer"])

    def literal(self):
        pos = self.pos()
        if self.at("true", "false"):
            return EBool(self.advance().text == "true", pos)
        if self.at("{"):
            self.advance()
            items = []
            if not self.at("}"):
                items.append(self.integer())
                while self.at(","):
                    self.advance()
                    items.append(self.integer())
            self.expect("}")
            return ESet(tuple(sorted(set(items))), pos)
        return ENum(self.integer(), pos)

    # -- goals -----------------------------------------------------------------

    def goal(self) -> Goal:
        pos = self.pos()
        self.expect("check")
        label = None
        if self.tok.kind in ("id", "kw"):
            mark = self.i
            word = self.word()
            if self.at(":"):
                self.advance()
                label = word
            else:
                self.i = mark
        if not self.at(*GOAL_KINDS):
            raise self.error(f"unexpected {self.tok.describe()}", [repr(k) for k in GOAL_KINDS])
        kind = self.advance().text
        args: tuple = ()
        bindings: tuple = ()
        if kind == "refine":
            lhs = self.command()
            self.expect(">=")
            args = (lhs, self.command())
        elif kind == "equal":
            lhs = self.command()
            self.expect("==")
            args = (lhs, self.command())
        elif kind == "triple":
            args = (self.set_arg(), self.command(), self.set_arg())
        elif kind == "establish":
            p = self.set_arg()
            self.expect("under")
            r = self.rel_arg()
            self.expect("[")
            e = self.expr()
            self.expect("->")
            k = self.literal()
            self.expect("]")
            args = (p, r, e, k, self.set_arg())
        elif kind == "stable":
            p = self.set_arg()
            self.expect("under")
            args = (p, self.rel_arg())
        elif kind == "tolerates":
            q = self.rel_arg()
            self.expect("under")
            r = self.rel_arg()
            self.expect("from")
            args = (q, r, self.set_arg())
        elif kind == "guarantee":
            c = self.command()
            self.expect("within")
            args = (c, self.rel_arg())
        elif kind == "law":
            tok = self.tok
            law_id = self.word()
            if law_id not in LAWS and law_id not in THEOREMS:
                raise self.error(f"unknown law {law_id!r}", sorted(LAWS) + sorted(THEOREMS), tok)
            args = (law_id,)
            bindings = self.bindings(law_sorts(law_id))
        else:
            bindings = self.bindings(GOAL_BINDINGS[kind])
        opts = self.goal_options()
        self.expect(";")
        return Goal(kind, args, bindings, label, pos=pos, **opts)

    def goal_options(self) -> dict:
        opts: dict = {}
        while self.at("depth", "engine", "expect") or (self.tok.kind == "id"
                                                         and self.tok.text == "samples"):
            key = self.advance().text
            if key in opts:
                raise self.error(f"option {key!r} given twice")
            if key in ("depth", "samples"):
                opts[key] = self.integer()
                if opts[key] < 0:
                    raise self.error(f"{key} must be non-negative")
            elif key == "engine":
                tok = self.tok
                opts[key] = self.word()
                if opts[key] not in ("enum", "graph"):
                    raise self.error(f"unknown engine {opts[key]!r}", ["enum", "graph"], tok)
            else:
                opts[key] = self.expect("fail", "holds").text
        return opts

    def bindings(self, sorts: dict) -> tuple:
        if not self.at("with"):
            return ()
        self.advance()
        out = []
        seen = set()
        while True:
            tok = self.tok
            name = self.word()
            if name not in sorts:
                raise self.error(f"unknown binding {name!r}", sorted(sorts), tok)
            if name in seen:
                raise self.error(f"binding {name!r} given twice", tok=tok)
            seen.add(name)
            self.expect("=")
            out.append((name, self.arg(sorts[name])))
            if not self.at(","):
                return tuple(out)
            self.advance()

    def arg(self, sort: str):
        if sort == SET:
            return self.set_arg()
        if sort == REL:
            return self.rel_arg()
        if sort == CMD:
            return self.command()
        if sort == FAMILY:
            pos = self.pos()
            self.expect("[")
            items = [self.set_arg()]
            while self.at(","):
                self.advance()
                items.append(self.set_arg())
            self.expect("]")
            return ArgList(tuple(items), pos)
        if sort == EXPR:
            return self.expr()
        if sort == WORD:
            return self.word()
        if sort == INT:
            return self.integer()
        if sort == DOMAIN:
            return self.domain()
        if sort == LITERAL:
            return self.literal()
        raise ValueError(sort)

    def set_arg(self):
        pos = self.pos()
        if self.at("{"):
            self.advance()
            p = self.expr()
            self.expect("}")
            return ArgPred(p, pos)
        if self.tok.kind == "id":
            return ArgName(self.advance().text, pos)
        raise self.error(f"unexpected {self.tok.describe()}", ["'{'", "set name"])

    def rel_arg(self):
        pos = self.pos()
        if self.at("<"):
            self.advance()
            p = self.expr(no_gt=True)
            self.expect(">")
            return ArgPred(p, pos)
        if self.at("univ", "id"):
            return ArgName(self.advance().text, pos)
        if self.tok.kind == "id":
            return ArgName(self.advance().text, pos)
        raise self.error(f"unexpected {self.tok.describe()}",
                         ["'<'", "'univ'", "'id'", "relation name"])

    # -- commands ----------------------------------------------------------------

    def _starts_command(self, t: Token) -> bool:
        return (t.kind == "id" or (t.kind == "kw" and t.text in CMD_START_KW)
                or (t.kind == "sym" and t.text in ("(", "[")))

    def command(self):
        return self._binary(0)

    _LEVELS = ("|", "||", "/\\", ";")

    def _binary(self, level: int):
        if level == len(self._LEVELS):
            return self.frame()
        op = self._LEVELS[level]
        pos = self.pos()
        left = self._binary(level + 1)
        while self.at(op):
            if op == ";" and not self._starts_command(self.peek()):
                break
            self.advance()
            left = CBin(op, left, self._binary(level + 1), pos)
        return left

    def _is_frame(self) -> bool:
        """``id (, id)* :`` ahead."""
        k = 0
        while self.peek(k).kind == "id":
            nxt = self.peek(k + 1)
            if nxt.kind != "sym" or nxt.text not in (",", ":"):
                return False
            if nxt.text == ":":
                return True
            k += 2
        return False

    def frame(self):
        if self._is_frame():
            pos = self.pos()
            names = [self.advance().text]
            while self.at(","):
                self.advance()
                names.append(self.ident())
            self.expect(":")
            return CFrame(tuple(names), self.frame(), pos)
        return self.primary()

    def primary(self):
        pos = self.pos()
        t = self.tok
        if self.at(*CMD_ATOMS):
            return CAtom(self.advance().text, pos)
        if self.at("assert", *ANGLE_CMDS, *BRACKET_CMDS):
            kind = self.advance().text
            open_, close = ("{", "}") if kind == "assert" else (
                ("<", ">") if kind in ANGLE_CMDS else ("[", "]"))
            if self.at(open_):
                self.advance()
                p = self.expr(no_gt=close == ">")
                self.expect(close)
                return CPred(kind, p, pos)
            # a named set (for test and assert) or relation, including univ and id
            if self.tok.kind == "id" or self.at("univ", "id"):
                name_pos = self.pos()
                return CPred(kind, ArgName(self.advance().text, name_pos), pos)
            raise self.error(f"unexpected {self.tok.describe()}", [repr(open_), "name"])
        if self.at("fin", "om"):
            kind = self.advance().text
            self.expect("(")
            body = self.command()
            self.expect(")")
            return CIter(kind, body, pos)
        if self.at("mu", "nu"):
            kind = self.advance().text
            binder = self.ident("binder")
            self.expect(".")
            return CFix(kind, binder, self.frame(), pos)
        if self.at("if"):
            self.advance()
            g = self.expr()
            self.expect("then")
            a = self.command()
            self.expect("else")
            b = self.command()
            self.expect("fi")
            return CIf(g, a, b, pos)
        if self.at("while"):
            self.advance()
            g = self.expr()
            self.expect("do")
            body = self.command()
            self.expect("od")
            return CWhile(g, body, pos)
        if self.at("cas"):
            self.advance()
            self.expect("(")
            target = self.lvalue()
            self.expect(",")
            old = self.expr()
            self.expect(",")
            new = self.expr()
            self.expect(")")
            return CCas(target, old, new, pos)
        if self.at("["):
            self.advance()
            e = self.expr()
            self.expect("->")
            k = self.literal()
            self.expect("]")
            return CEval(e, k, pos)
        if self.at("("):
            self.advance()
            c = self.command()
            self.expect(")")
            return c
        if t.kind == "id":
            if self.peek().text in (":=", "[") and self.peek().kind == "sym":
                target = self.lvalue()
                self.expect(":=")
                return CAssign(target, self.expr(), pos)
            return CName(self.advance().text, pos)
        raise self.error(f"unexpected {t.describe()}", ["command"])

    def lvalue(self) -> EName:
        pos = self.pos()
        name = self.ident()
        index = None
        if self.at("["):
            self.advance()
            index = self.expr()
            self.expect("]")
        return EName(name, False, index, pos)

    # -- expressions -----------------------------------------------------------------

    def expr(self, no_gt: bool = False):
        return self._or(no_gt)

    def _or(self, no_gt):
        pos = self.pos()
        left = self._and(no_gt)
        while self.at("or"):
            self.advance()
            left = EBinary("or", left, self._and(no_gt), pos)
        return left

    def _and(self, no_gt):
        pos = self.pos()
        left = self._not(no_gt)
        while self.at("and"):
            self.advance()
            left = EBinary("and", left, self._not(no_gt), pos)
        return left

    def _not(self, no_gt):
        if self.at("not"):
            pos = self.pos()
            self.advance()
            return EUnary("not", self._not(no_gt), pos)
        return self._cmp(no_gt)

    def _cmp(self, no_gt):
        pos = self.pos()
        left = self._add(no_gt)
        ops = [o for o in COMPARISONS if not (no_gt and o in (">", ">="))]
        if self.at(*ops):
            op = self.advance().text
            return EBinary(op, left, self._add(no_gt), pos)
        return left

    def _add(self, no_gt):
        pos = self.pos()
        left = self._unary(no_gt)
        while self.at(*ADDITIVE):
            op = self.advance().text
            left = EBinary(op, left, self._unary(no_gt), pos)
        return left

    def _unary(self, no_gt):
        if self.at("-"):
            pos = self.pos()
            if self.peek().kind == "int":
                return ENum(self.integer(), pos)
            self.advance()
            return EUnary("-", self._unary(no_gt), pos)
        return self._atom()

    def _atom(self):
        pos = self.pos()
        t = self.tok
        if t.kind == "int" or self.at("true", "false", "{"):
            return self.literal()
        if self.at("*"):
            self.advance()
            return EDeref(self.lvalue(), pos)
        if self.at("("):
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        if t.kind == "id":
            name = self.advance().text
            primed = False
            if self.at("'"):
                self.advance()
                primed = True
            index = None
            if self.at("["):
                self.advance()
                index = self.expr()
                self.expect("]")
            return EName(name, primed, index, pos)
        raise self.error(f"unexpected {t.describe()}", ["expression"])


def parse(text: str) -> Script:
    """Parse a whole script; raises :class:`ScriptError` with a position."""
    return Parser(text).script()


def parse_command(text: str):
    p = Parser(text)
    c = p.command()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.describe()}", ["end of input"])
    return c


def parse_expr(text: str):
    p = Parser(text)
    e = p.expr()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.describe()}", ["end of input"])
    return e
