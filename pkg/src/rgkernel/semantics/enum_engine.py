"""Reference engine: canonical trace sets as flat frozensets.

Every operator is implemented directly on sets of traces and the result is
re-normalized.  Slow, but each line is easy to audit against the definitions;
it serves as the oracle for the graph engine.
"""
from __future__ import annotations

import threading
from collections import defaultdict

from ..language import (
    Bot, Choice, Command, Conj, Env, Mu, Nu, Par, Pgm, Seq, Test, Top, Var,
)
from ..state_model import StateSpace
from .traces import A, ENV, I, PI, T, Engine, Trace, TraceSet, covered, normalize, trace_key


class FixpointDivergence(RuntimeError):
    pass


class ResourceLimit(RuntimeError):
    pass


def iteration_cap(space: StateSpace, depth: int) -> int:
    return 10 * (depth + 1) * space.size


class EnumTraceSet(TraceSet):
    engine = Engine.ENUM

    def __init__(self, space: StateSpace, depth: int, traces: frozenset):
        self.space = space
        self.depth = depth
        self._traces = traces

    def traces(self) -> frozenset:
        return self._traces


class EnumEngine:
    kind = Engine.ENUM

    def __init__(self, space: StateSpace, depth: int):
        if depth < 0:
            raise ValueError("depth must be non-negative")
        self.space = space
        self.depth = depth
        self.lock = threading.RLock()
        self.clear_caches()

    def clear_caches(self) -> None:
        self._memo: dict = {}
        n = self.space.size
        self.bot = normalize(self.space, self.depth, ())
        self.top = normalize(self.space, self.depth, (Trace(s, (), A) for s in range(n)))

    def norm(self, traces) -> frozenset:
        return normalize(self.space, self.depth, traces)

    # -- operators -----------------------------------------------------------

    def test(self, p) -> frozenset:
        return self.norm(Trace(s, (), T) for s in p)

    def step(self, label, r) -> frozenset:
        if self.depth < 1:
            return self.bot
        return self.norm(Trace(a, ((label, b),), T) for a, b in r)

    def choice(self, sets) -> frozenset:
        out = set()
        for s in sets:
            out |= s
        return self.norm(out)

    def seq(self, c: frozenset, d: frozenset) -> frozenset:
        by_start = defaultdict(list)
        for u in d:
            by_start[u.start].append(u)
        out = []
        for t in c:
            if t.status != T:
                out.append(t)
                continue
            room = self.depth - len(t.steps)
            for u in by_start[t.final]:
                if len(u.steps) <= room:
                    out.append(Trace(t.start, t.steps + u.steps, u.status))
        return self.norm(out)

    def par(self, c: frozenset, d: frozenset) -> frozenset:
        def key(t):
            return (t.start, tuple(p for _, p in t.steps))

        groups = defaultdict(list)
        for u in d:
            groups[key(u)].append(u)
        out = []
        for t in c:
            for u in groups.get(key(t), ()):
                labels = []
                for (lt, _), (lu, _) in zip(t.steps, u.steps):
                    if lt == PI and lu == PI:
                        break
                    labels.append(PI if PI in (lt, lu) else ENV)
                else:
                    if A in (t.status, u.status):
                        st = A
                    elif t.status == T and u.status == T:
                        st = T
                    else:
                        st = I
                    steps = tuple(zip(labels, (p for _, p in t.steps)))
                    out.append(Trace(t.start, steps, st))
        return self.norm(out)

    def conj(self, c: frozenset, d: frozenset) -> frozenset:
        out = set(c & d)
        for x, y in ((c, d), (d, c)):
            for t in x:
                if t.status == A and Trace(t.start, t.steps, I) in y:
                    out.add(t)
        return self.norm(out)

    # -- denotation ----------------------------------------------------------

    def denote(self, c: Command, env: dict | None = None) -> frozenset:
        env = env or {}
        fv = c.free_vars
        key = (c, tuple(sorted((b, env[b]) for b in fv)) if fv else ())
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        res = self._denote(c, env)
        self._memo[key] = res
        return res

    def _denote(self, c: Command, env: dict) -> frozenset:
        if isinstance(c, Bot):
            return self.bot
        if isinstance(c, Top):
            return self.top
        if isinstance(c, Test):
            return self.test(c.p)
        if isinstance(c, Pgm):
            return self.step(PI, c.r)
        if isinstance(c, Env):
            return self.step(ENV, c.r)
        if isinstance(c, Choice):
            return self.choice(self.denote(b, env) for b in c.branches)
        if isinstance(c, Seq):
            return self.seq(self.denote(c.first, env), self.denote(c.second, env))
        if isinstance(c, Par):
            return self.par(self.denote(c.left, env), self.denote(c.right, env))
        if isinstance(c, Conj):
            return self.conj(self.denote(c.left, env), self.denote(c.right, env))
        if isinstance(c, Var):
            if c.binder not in env:
                raise ValueError(f"unbound variable {c.binder}")
            return env[c.binder]
        if isinstance(c, (Mu, Nu)):
            x = self.bot if isinstance(c, Mu) else self.top
            for _ in range(iteration_cap(self.space, self.depth)):
                y = self.denote(c.body, {**env, c.binder: x})
                if y == x:
                    return x
                x = y
            raise FixpointDivergence(f"no fixed point for {c.binder} within cap")
        raise TypeError(f"not a command: {c!r}")

    def trace_set(self, c: Command) -> EnumTraceSet:
        with self.lock:
            return EnumTraceSet(self.space, self.depth, self.denote(c))

    # -- queries -------------------------------------------------------------

    def uncovered(self, c: EnumTraceSet, d: EnumTraceSet) -> Trace | None:
        """Shortest trace of ``d`` outside the abort closure of ``c``."""
        ct = c.traces()
        missing = [t for t in d.traces() if not covered(ct, t)]
        return min(missing, key=trace_key) if missing else None
