"""Theorem checkers addressable by id, swept over their seeded generators.

A sweep holds when no instance raises a soundness alarm; instances whose
premises fail are expected (the generators break premises on purpose) and
are only counted.
"""
from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field

from ..semantics import Engine
from ..verdict import Outcome, Verdict
from .instances import (
    conditional_instances, expression_instances, recursion_instances, while_instances,
)
from .theorems import (
    check_conditional_theorem, check_expression_rule, check_recursion_theorem,
    check_while_theorem,
)

# id -> (instance generator, checker, default depth)
THEOREMS = {
    "expressions": (expression_instances, check_expression_rule, 3),
    "rely-conditional-spec": (conditional_instances, check_conditional_theorem, 3),
    "well-founded-recursion-early": (recursion_instances, check_recursion_theorem, 4),
    "intro-while": (while_instances, check_while_theorem, 4),
}


@dataclass
class TheoremSweep:
    theorem_id: str
    outcomes: Counter = field(default_factory=Counter)
    alarms: list = field(default_factory=list)  # (space, instance, verdict)

    @property
    def checked(self) -> int:
        return sum(self.outcomes.values())

    @property
    def ok(self) -> bool:
        return not self.alarms and not self.outcomes[Outcome.INCONCLUSIVE]


def sweep_theorem(theorem_id: str, count: int, seed: int | None = None,
                  depth: int | None = None, engine=Engine.GRAPH) -> TheoremSweep:
    try:
        gen, check, default_depth = THEOREMS[theorem_id]
    except KeyError:
        raise KeyError(f"unknown theorem {theorem_id!r}; known: {', '.join(THEOREMS)}") from None
    res = TheoremSweep(theorem_id)
    for space, inst in gen(count, seed, default_depth if depth is None else depth):
        v = check(space, inst, engine)
        res.outcomes[v.outcome] += 1
        if v.outcome is Outcome.SOUNDNESS_ALARM:
            res.alarms.append((space, inst, v))
    return res


def theorem_depth(theorem_id: str) -> int:
    return THEOREMS[theorem_id][2]


def sweep_verdict(res: TheoremSweep, depth: int, engine: Engine, t0: float) -> Verdict:
    held = res.outcomes[Outcome.HOLDS]
    detail = (f"{res.checked} instances, {held} hold, "
              f"{res.outcomes[Outcome.PREMISE_VIOLATION]} premise violations")
    elapsed = time.perf_counter() - t0
    if res.alarms:
        _, _, v = res.alarms[0]
        return Verdict(Outcome.SOUNDNESS_ALARM, depth, engine, v.counterexample, elapsed,
                       f"{len(res.alarms)} alarms; {detail}")
    if res.outcomes[Outcome.INCONCLUSIVE]:
        return Verdict(Outcome.INCONCLUSIVE, depth, engine, elapsed=elapsed, detail=detail)
    return Verdict(Outcome.HOLDS, depth, engine, elapsed=elapsed, detail=detail)


__all__ = ["THEOREMS", "TheoremSweep", "sweep_theorem", "sweep_verdict", "theorem_depth"]
