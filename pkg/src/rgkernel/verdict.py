"""Outcome of a bounded check."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .semantics.traces import Engine, Trace


class Outcome(enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INCONCLUSIVE = "inconclusive"
    PREMISE_VIOLATION = "premise-violation"
    SOUNDNESS_ALARM = "soundness-alarm"

    def __str__(self) -> str:
        return self.value


@dataclass
class Verdict:
    outcome: Outcome
    depth: int
    engine: Engine
    counterexample: Trace | None = None
    elapsed: float = 0.0
    detail: str = ""
    obligations: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.outcome is Outcome.HOLDS

    @property
    def fails(self) -> bool:
        return self.outcome is Outcome.FAILS

    def __bool__(self) -> bool:
        return self.holds

    def summary(self) -> str:
        s = f"{self.outcome} at depth {self.depth} ({self.engine})"
        if self.detail:
            s += f": {self.detail}"
        return s


def combine(depth: int, engine: Engine, parts: dict, elapsed: float = 0.0) -> Verdict:
    """Holds iff every part holds; otherwise the first non-holding outcome wins.

    A soundness alarm or an inconclusive part outranks a plain failure.
    """
    rank = {
        Outcome.SOUNDNESS_ALARM: 0,
        Outcome.INCONCLUSIVE: 1,
        Outcome.FAILS: 2,
        Outcome.PREMISE_VIOLATION: 3,
        Outcome.HOLDS: 4,
    }
    worst = None
    for name, v in parts.items():
        if worst is None or rank[v.outcome] < rank[worst[1].outcome]:
            worst = (name, v)
    if worst is None or worst[1].holds:
        return Verdict(Outcome.HOLDS, depth, engine, elapsed=elapsed, obligations=dict(parts))
    name, v = worst
    return Verdict(
        v.outcome, depth, engine, v.counterexample, elapsed,
        detail=f"{name}: {v.detail or v.outcome}", obligations=dict(parts),
    )
