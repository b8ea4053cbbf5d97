"""Tokenizer for check scripts."""
from __future__ import annotations

import re
from dataclasses import dataclass


class ScriptError(Exception):
    """Parse or elaboration error with a source position."""

    def __init__(self, message: str, line: int = 0, col: int = 0,
                 expected: tuple = (), source: str | None = None):
        self.message = message
        self.line = line
        self.col = col
        self.expected = tuple(sorted(set(expected)))
        self.source = source
        super().__init__(self.render())

    def render(self) -> str:
        head = f"{self.line}:{self.col}: {self.message}" if self.line else self.message
        if self.expected:
            head += "; expected one of: " + " ".join(self.expected)
        if self.source and self.line:
            lines = self.source.splitlines()
            if 0 < self.line <= len(lines):
                text = lines[self.line - 1]
                head += f"\n  {text}\n  {' ' * (self.col - 1)}^"
        return head


KEYWORDS = frozenset({
    "var", "arr", "set", "rel", "cmd", "check", "in", "bool", "powerset",
    "bot", "top", "nil", "test", "pgm", "env", "assert", "guar", "rely", "term", "idle",
    "fair", "post", "atomic", "opt", "fin", "om", "mu", "nu", "if", "then", "else", "fi",
    "while", "do", "od", "cas", "true", "false", "and", "or", "not", "notin", "union",
    "inter", "subset", "subseteq", "depth", "engine", "expect", "holds", "fail",
    "refine", "equal", "triple", "establish", "stable", "tolerates", "under", "from",
    "guarantee", "within", "law", "with", "while-rule", "recursion-rule", "remove",
    "fairness", "hoare-loop", "variant", "univ", "id",
})

# longest operators first
SYMBOLS = (
    "/\\", "||", ":=", "->", ">=", "<=", "!=", "==", "..",
    ";", ":", ",", "|", "{", "}", "[", "]", "(", ")", "<", ">", "=", "+", "-", "*", "'", ".",
)

_WORD = re.compile(r"[A-Za-z_][A-Za-z0-9_]*(?:-[A-Za-z][A-Za-z0-9_]*)*")
_INT = re.compile(r"[0-9]+")


@dataclass(frozen=True)
class Token:
    kind: str  # "kw", "id", "int", "sym", "eof"
    text: str
    line: int
    col: int

    def describe(self) -> str:
        return "end of input" if self.kind == "eof" else repr(self.text)


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    line, col, i = 1, 1, 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line, col, i = line + 1, 1, i + 1
            continue
        if ch.isspace():
            col, i = col + 1, i + 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        m = _WORD.match(text, i)
        if m:
            word = m.group()
            # hyphenated words are only keywords; otherwise split at the hyphen
            if "-" in word and word not in KEYWORDS:
                word = word.split("-", 1)[0]
            kind = "kw" if word in KEYWORDS else "id"
            out.append(Token(kind, word, line, col))
            i += len(word)
            col += len(word)
            continue
        m = _INT.match(text, i)
        if m:
            out.append(Token("int", m.group(), line, col))
            i += len(m.group())
            col += len(m.group())
            continue
        for sym in SYMBOLS:
            if text.startswith(sym, i):
                out.append(Token("sym", sym, line, col))
                i += len(sym)
                col += len(sym)
                break
        else:
            raise ScriptError(f"unexpected character {ch!r}", line, col, source=text)
    out.append(Token("eof", "", line, col))
    return out
