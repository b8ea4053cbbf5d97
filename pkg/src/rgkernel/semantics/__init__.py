"""Bounded-depth trace semantics with two interchangeable engines."""
from __future__ import annotations

import functools
import time

from ..language import Command, Mu, Nu
from ..state_model import StateRel, StateSpace
from .enum_engine import EnumEngine, EnumTraceSet, FixpointDivergence, ResourceLimit
from .graph_engine import GraphEngine, GraphTraceSet, bad_successor
from .traces import (
    A, ENV, I, PI, T, Engine, Label, Status, Trace, TraceSet, covered, normalize,
    trace_key, validate,
)

__all__ = [
    "A", "ENV", "I", "PI", "T", "Engine", "EnumEngine", "EnumTraceSet",
    "FixpointDivergence", "GraphEngine", "GraphTraceSet", "Label", "ResourceLimit",
    "Status", "Trace", "TraceSet", "covered", "denote", "engines_agree",
    "feasible", "fixpoint", "get_engine", "guarantee_violation", "normalize",
    "satisfies_guarantee", "trace_key", "validate",
]


def _engine_kind(engine) -> Engine:
    return engine if isinstance(engine, Engine) else Engine(str(engine).lower())


@functools.lru_cache(maxsize=64)
def _engine(space: StateSpace, depth: int, kind: Engine):
    cls = EnumEngine if kind is Engine.ENUM else GraphEngine
    return cls(space, depth)


def get_engine(space: StateSpace, depth: int, engine=Engine.GRAPH):
    """Shared engine instance for ``(space, depth)``; memo tables persist."""
    return _engine(space, depth, _engine_kind(engine))


def clear_engines() -> None:
    _engine.cache_clear()


def denote(space: StateSpace, c: Command, depth: int, engine=Engine.GRAPH) -> TraceSet:
    if depth < 0:
        raise ValueError("depth must be non-negative")
    if c.free_vars:
        raise ValueError(f"command has free variables {sorted(c.free_vars)}")
    return get_engine(space, depth, engine).trace_set(c)


def fixpoint(space: StateSpace, binder: str, body: Command, polarity, depth: int,
             engine=Engine.GRAPH) -> TraceSet:
    """Least (``Mu``) or greatest (``Nu``) fixed point of ``λbinder. body``."""
    cls = polarity if polarity in (Mu, Nu) else {"mu": Mu, "nu": Nu}[str(polarity).lower()]
    return denote(space, cls(binder, body), depth, engine)


def engines_agree(space: StateSpace, c: Command, depth: int) -> bool:
    a = denote(space, c, depth, Engine.ENUM)
    b = denote(space, c, depth, Engine.GRAPH)
    return a.traces() == b.traces()


def feasible(ts: TraceSet, starts=None) -> bool:
    """Some terminating trace exists (from one of ``starts`` if given)."""
    return bool(ts.final_states(starts))


def guarantee_violation(ts: TraceSet, g: StateRel) -> Trace | None:
    """Key-minimal witness of a program step outside ``g``.

    Aborting traces are violations: their closure includes a bad program
    step whenever depth leaves room for one, else the abort itself.
    """
    if isinstance(ts, GraphTraceSet):
        return ts.graph.guarantee_violation(ts.den, g)
    bad_step = bad_successor(ts.space.size, g)
    cands = []
    for t in ts.traces():
        pre = t.start
        for j, (lab, post) in enumerate(t.steps):
            if lab == PI and (pre, post) not in g:
                cands.append(Trace(t.start, t.steps[: j + 1], I))
                break
            pre = post
        else:
            if t.status == A:
                if len(t.steps) < ts.depth and t.final in bad_step:
                    cands.append(Trace(t.start, t.steps + ((PI, bad_step[t.final]),), I))
                else:
                    cands.append(t)
    return min(cands, key=trace_key) if cands else None


def satisfies_guarantee(space: StateSpace, c: Command, g: StateRel, depth: int,
                        engine=Engine.GRAPH):
    from ..verdict import Outcome, Verdict

    kind = _engine_kind(engine)
    t0 = time.perf_counter()
    try:
        ts = denote(space, c, depth, kind)
        bad = guarantee_violation(ts, frozenset(g))
    except ResourceLimit as exc:
        return Verdict(Outcome.INCONCLUSIVE, depth, kind, elapsed=time.perf_counter() - t0,
                       detail=str(exc))
    out = Outcome.HOLDS if bad is None else Outcome.FAILS
    return Verdict(out, depth, kind, bad, time.perf_counter() - t0)
