"""Aczel traces and the canonical form of depth-bounded trace sets.

A trace is a start state, a chain of labelled steps and a status.  Steps
store only ``(label, post)``; the pre-state of a step is the post-state of
the previous one (or the start).

Canonical form of a trace set (both engines produce it):

* every non-strict incomplete prefix of a member is a member, and the
  zero-step incomplete trace at every state is a member;
* abort closure is implicit: an aborted trace covers every trace with the
  same or more steps, so nothing extending an aborted member is stored, and
  no terminated trace shares its steps with an aborted one.
"""
from __future__ import annotations

import enum
from typing import Iterable, NamedTuple

from ..state_model import StateSpace


class Label(enum.IntEnum):
    PI = 0
    ENV = 1

    def __str__(self) -> str:
        return "pi" if self is Label.PI else "env"


class Status(enum.IntEnum):
    TERMINATED = 0
    ABORTED = 1
    INCOMPLETE = 2

    def __str__(self) -> str:
        return self.name.lower()


T, A, I = Status.TERMINATED, Status.ABORTED, Status.INCOMPLETE
PI, ENV = Label.PI, Label.ENV


class Engine(enum.Enum):
    ENUM = "enum"
    GRAPH = "graph"

    def __str__(self) -> str:
        return self.value


class Trace(NamedTuple):
    start: int
    steps: tuple  # ((label, post), ...)
    status: Status

    @property
    def final(self) -> int:
        return self.steps[-1][1] if self.steps else self.start

    def chained(self) -> list[tuple[Label, int, int]]:
        """Steps as ``(label, pre, post)`` triples."""
        out = []
        pre = self.start
        for label, post in self.steps:
            out.append((Label(label), pre, post))
            pre = post
        return out

    def prefix(self, j: int, status: Status = I) -> "Trace":
        return Trace(self.start, self.steps[:j], status)

    def render(self, space: StateSpace) -> dict:
        return {
            "start": space.fmt_state(self.start),
            "steps": [
                {"label": str(lab), "pre": space.fmt_state(a), "post": space.fmt_state(b)}
                for lab, a, b in self.chained()
            ],
            "status": str(Status(self.status)),
        }

    def pretty(self, space: StateSpace) -> str:
        def st(i):
            return "(" + ", ".join(space.fmt_state(i)) + ")"

        parts = [st(self.start)]
        for lab, _, b in self.chained():
            parts.append(f"-{lab}-> {st(b)}")
        mark = {T: "✓", A: "↯", I: "…"}[Status(self.status)]
        return " ".join(parts) + " " + mark


def trace_key(t: Trace) -> tuple:
    """Shortest first, then start state, then steps, then status."""
    return (len(t.steps), t.start, tuple((int(l), p) for l, p in t.steps), int(t.status))


def normalize(space: StateSpace, depth: int, traces: Iterable[Trace]) -> frozenset:
    """Canonical form: truncate, drop abort-dominated traces, add prefixes."""
    cand = [t for t in traces if len(t.steps) <= depth]
    aborted = {(t.start, t.steps) for t in cand if t.status == A}
    out = set()
    for t in cand:
        n = len(t.steps)
        dominated = False
        if aborted:
            for j in range(n + 1):
                if (t.start, t.steps[:j]) in aborted and (j < n or t.status == T):
                    dominated = True
                    break
        if dominated:
            continue
        out.add(t)
        for j in range(n + 1):
            out.add(Trace(t.start, t.steps[:j], I))
    for s in range(space.size):
        out.add(Trace(s, (), I))
    return frozenset(out)


def validate(space: StateSpace, depth: int, traces: frozenset) -> list[str]:
    """Problems with a canonical trace set; empty when well-formed."""
    problems = []
    aborted = {(t.start, t.steps) for t in traces if t.status == A}
    for s in range(space.size):
        if Trace(s, (), I) not in traces:
            problems.append(f"missing baseline at state {s}")
    for t in traces:
        if not 0 <= t.start < space.size:
            problems.append(f"bad start {t}")
        if len(t.steps) > depth:
            problems.append(f"too long: {t}")
        for label, post in t.steps:
            if label not in (PI, ENV) or not 0 <= post < space.size:
                problems.append(f"bad step in {t}")
        for j in range(len(t.steps) + 1):
            if Trace(t.start, t.steps[:j], I) not in traces:
                problems.append(f"not prefix-closed at {t}")
                break
        for j in range(len(t.steps) + 1):
            if (t.start, t.steps[:j]) in aborted and (j < len(t.steps) or t.status == T):
                problems.append(f"abort-dominated member {t}")
                break
    return problems


def covered(traces: frozenset, t: Trace) -> bool:
    """Membership in the abort closure of a canonical set."""
    if t in traces:
        return True
    for j in range(len(t.steps) + 1):
        if Trace(t.start, t.steps[:j], A) in traces:
            return True
    return False


class TraceSet:
    """Denotation of a command at a fixed depth; engine-specific payload."""

    engine: Engine
    space: StateSpace
    depth: int

    def traces(self) -> frozenset:
        raise NotImplementedError

    def __eq__(self, other) -> bool:
        if not isinstance(other, TraceSet):
            return NotImplemented
        return self.space is other.space and self.traces() == other.traces()

    def __hash__(self):
        return hash(self.traces())

    def __len__(self) -> int:
        return len(self.traces())

    def __iter__(self):
        return iter(sorted(self.traces(), key=trace_key))

    def __contains__(self, t: Trace) -> bool:
        return t in self.traces()

    def covers(self, t: Trace) -> bool:
        return covered(self.traces(), t)

    def validate(self) -> list[str]:
        return validate(self.space, self.depth, self.traces())

    def at(self, start: int) -> list[Trace]:
        return [t for t in self if t.start == start]

    def terminated(self) -> list[Trace]:
        return [t for t in self if t.status == T]

    def aborted(self) -> list[Trace]:
        return [t for t in self if t.status == A]

    def final_states(self, starts: Iterable[int] | None = None) -> frozenset:
        starts = set(range(self.space.size) if starts is None else starts)
        return frozenset(t.final for t in self.traces() if t.status == T and t.start in starts)
