"""Bounded refinement, equality, Hoare triples and expression judgements."""
from __future__ import annotations

import time

from .language import Command, Conj, Seq, assert_, eval_expr, rely
from .semantics import Engine, ResourceLimit, denote, get_engine
from .semantics.enum_engine import FixpointDivergence
from .state_model import StateRel, StateSet, StateSpace, Value
from .verdict import Outcome, Verdict, combine


def _kind(engine) -> Engine:
    return engine if isinstance(engine, Engine) else Engine(str(engine).lower())


def refines(space: StateSpace, c: Command, d: Command, depth: int,
            engine=Engine.GRAPH) -> Verdict:
    """``c ⊒ d``: every trace of ``d`` is covered by ``c``.

    Fails with the shortest uncovered trace of ``d``.
    """
    kind = _kind(engine)
    t0 = time.perf_counter()
    eng = get_engine(space, depth, kind)
    try:
        with eng.lock:
            tc = denote(space, c, depth, kind)
            td = denote(space, d, depth, kind)
            bad = eng.uncovered(tc, td)
    except (ResourceLimit, FixpointDivergence) as exc:
        return Verdict(Outcome.INCONCLUSIVE, depth, kind, elapsed=time.perf_counter() - t0,
                       detail=f"{type(exc).__name__}: {exc}")
    elapsed = time.perf_counter() - t0
    if bad is None:
        return Verdict(Outcome.HOLDS, depth, kind, elapsed=elapsed)
    return Verdict(Outcome.FAILS, depth, kind, bad, elapsed,
                   detail="right-hand trace not covered by left-hand side")


def equals(space: StateSpace, c: Command, d: Command, depth: int,
           engine=Engine.GRAPH) -> Verdict:
    t0 = time.perf_counter()
    fwd = refines(space, c, d, depth, engine)
    if not fwd.holds:
        fwd.detail = "left refined-by right fails: " + fwd.detail
        return fwd
    back = refines(space, d, c, depth, engine)
    if not back.holds:
        back.detail = "right refined-by left fails: " + back.detail
    back.elapsed = time.perf_counter() - t0
    return back


def hoare_triple(space: StateSpace, p: StateSet, c: Command, p1: StateSet, depth: int,
                 engine=Engine.GRAPH) -> Verdict:
    """``{p} c {p1}`` as ``assert p ; c ⊒ c ; assert p1``."""
    return refines(
        space, Seq(assert_(space, p), c), Seq(c, assert_(space, p1)), depth, engine
    )


def establishes(space: StateSpace, p: StateSet, r: StateRel, e, k: Value, post: StateSet,
                depth: int, engine=Engine.GRAPH) -> Verdict:
    """Evaluating ``e`` to ``k`` under interference ``r`` from ``p`` ends in ``post``."""
    return hoare_triple(space, p, Conj(rely(space, r), eval_expr(space, e, k)), post,
                        depth, engine)


def strongest_post(space: StateSpace, p: StateSet, c: Command, depth: int,
                   engine=Engine.GRAPH) -> StateSet:
    """Final states of terminating traces of ``c`` that start in ``p``."""
    return denote(space, c, depth, engine).final_states(p)


__all__ = [
    "Outcome", "Verdict", "combine", "equals", "establishes", "hoare_triple",
    "refines", "strongest_post",
]
