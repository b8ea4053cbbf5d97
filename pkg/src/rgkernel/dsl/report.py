"""Human and json renderings of goal results.

The json rendering is byte-stable: key order is fixed, timings are ``null``
unless requested, and states print as sorted ``lvalue=value`` strings.
"""
from __future__ import annotations

import json

from .. import __version__
from .runner import GoalResult


def goal_record(res: GoalResult, timings: bool = False) -> dict:
    v = res.verdict
    cex = v.counterexample.render(res.space) if v.counterexample is not None else None
    return {
        "id": res.id,
        "kind": res.kind,
        "verdict": v.outcome.value,
        "depth": v.depth,
        "engine": v.engine.value,
        "elapsed_ms": round(v.elapsed * 1000, 3) if timings else None,
        "counterexample": cex,
    }


def render_json(results: list[GoalResult], seed: int, timings: bool = False) -> str:
    doc = {
        "version": __version__,
        "seed": seed,
        "goals": [goal_record(r, timings) for r in results],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def render_human(results: list[GoalResult], timings: bool = False) -> str:
    lines = []
    for r in results:
        v = r.verdict
        mark = "ok " if r.expected else "BAD"
        note = " (expected fail)" if r.expect == "fail" else ""
        head = f"[{mark}] {r.id} {r.kind}: {v.outcome.value}{note}  depth {v.depth}, {v.engine.value}"
        if timings:
            head += f", {v.elapsed * 1000:.1f} ms"
        lines.append(head)
        if v.detail:
            lines.append(f"      {v.detail}")
        for name, ob in v.obligations.items():
            if not ob.holds:
                lines.append(f"      {name}: {ob.outcome.value}")
        if v.counterexample is not None:
            lines.append("      counterexample: " + v.counterexample.pretty(r.space))
    good = sum(r.expected for r in results)
    lines.append(f"{good}/{len(results)} goals as expected")
    return "\n".join(lines) + "\n"


def render(results: list[GoalResult], fmt: str, seed: int, timings: bool = False) -> str:
    if fmt == "json":
        return render_json(results, seed, timings)
    if fmt == "human":
        return render_human(results, timings)
    raise ValueError(f"unknown report format {fmt!r}")


__all__ = ["goal_record", "render", "render_human", "render_json"]
