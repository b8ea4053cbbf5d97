"""Lock-free removal of an element from a shared set, checked end to end.

State: ``w`` (the shared set) and ``sample`` (a local copy), both ranging
over subsets of a small universe.  The code repeatedly samples ``w`` and
tries to CAS it to ``sample - {i}`` until ``i`` is gone::

    while i ∈ *w do
        sample := *w ;
        cas(w, *sample, *sample - {i})
    od

The environment may only shrink ``w`` and never touches ``sample``; the code
may only remove ``i``.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

from .language import (
    Binary, Choice, Conj, Env, Pgm, Seq, VariantSpec, any_steps, assignment, cas, const,
    deref, fair, guar, om, post_spec, rely, term, while_loop,
)
from .laws.theorems import WhileRuleInstance, check_while_theorem
from .refinement import equals, refines
from .semantics import Engine, denote, satisfies_guarantee
from .semantics.graph_engine import GraphTraceSet
from .semantics.traces import ENV, PI, T, Trace, TraceSet
from .state_model import Base, FinSet, StateSpace, subsets_domain
from .verdict import Verdict

W, SAMPLE = Base("w"), Base("sample")


@dataclass(frozen=True)
class RemoveConfig:
    universe: tuple = (0, 1)
    i: int = 1
    depth: int = 8
    engine: Engine = Engine.GRAPH
    # "shrink": w' ⊆ w and sample unchanged; "univ": anything goes
    rely_mode: str = "shrink"
    # "remove-only": w - w' ⊆ {i} and w' ⊆ w; "identity": w' = w
    guarantee_mode: str = "remove-only"

    def __post_init__(self):
        if self.i not in self.universe:
            raise ValueError(f"element {self.i} not in universe {self.universe}")
        if self.rely_mode not in ("shrink", "univ"):
            raise ValueError(f"unknown rely mode {self.rely_mode!r}")
        if self.guarantee_mode not in ("remove-only", "identity"):
            raise ValueError(f"unknown guarantee mode {self.guarantee_mode!r}")


def remove_space(cfg: RemoveConfig) -> StateSpace:
    dom = subsets_domain(cfg.universe)
    return StateSpace([(W, dom), (SAMPLE, dom)])


def _w(m) -> frozenset:
    return m[W].items


def remove_rely(space: StateSpace, cfg: RemoveConfig) -> frozenset:
    if cfg.rely_mode == "univ":
        return space.univ
    return space.rel_where(lambda a, b: _w(b) <= _w(a) and a[SAMPLE] == b[SAMPLE])


def remove_guarantee(space: StateSpace, cfg: RemoveConfig) -> frozenset:
    if cfg.guarantee_mode == "identity":
        # the shared set never changes; sample is local and stays unconstrained
        return space.rel_where(lambda a, b: a[W] == b[W])
    return space.rel_where(lambda a, b: _w(a) - _w(b) <= {cfg.i} and _w(b) <= _w(a))


def removed(space: StateSpace, cfg: RemoveConfig) -> frozenset:
    """States with ``i ∉ w``."""
    return space.set_where(lambda m: cfg.i not in _w(m))


def env_within(space: StateSpace, r: frozenset):
    """Any program steps, environment steps only from ``r``; never aborts."""
    return om(space, Choice((Pgm(space.univ), Env(frozenset(r)))))


def remove_spec(cfg: RemoveConfig, space: StateSpace | None = None):
    space = space or remove_space(cfg)
    gone = space.rel_where(lambda a, b: cfg.i not in _w(b))
    return Conj(rely(space, remove_rely(space, cfg)),
                Conj(guar(space, remove_guarantee(space, cfg)), post_spec(space, gone)))


def remove_guard(cfg: RemoveConfig):
    return Binary(const(cfg.i), "in", deref("w"))


def remove_body(cfg: RemoveConfig, space: StateSpace | None = None):
    """``sample := *w ; cas(w, *sample, *sample - {i})``."""
    space = space or remove_space(cfg)
    minus_i = Binary(deref("sample"), "-", const(FinSet(frozenset({cfg.i}))))
    return Seq(assignment(space, SAMPLE, deref("w")),
               cas(space, W, deref("sample"), minus_i))


def remove_code(cfg: RemoveConfig, space: StateSpace | None = None):
    space = space or remove_space(cfg)
    return while_loop(space, remove_guard(cfg), remove_body(cfg, space))


def remove_while_instance(cfg: RemoveConfig, space: StateSpace | None = None) -> WhileRuleInstance:
    space = space or remove_space(cfg)
    gone = removed(space, cfg)
    return WhileRuleInstance(
        b=remove_guard(cfg), c=remove_body(cfg, space), r=remove_rely(space, cfg),
        q=space.univ, p=space.all, p_t=space.all, p_f=gone, p_x=gone,
        variant=VariantSpec.subset_order(space, deref("w")), depth=cfg.depth,
    )


# -- witness for the early exit -------------------------------------------------


def _witness_search(ts: TraceSet, start_ok, events, pi_ok) -> Trace | None:
    """Key-minimal terminated trace that starts in ``start_ok``, passes the
    ``(label, pred)`` events in order and whose π steps all satisfy ``pi_ok``."""
    n = ts.space.size
    goal = len(events)

    def advance(phase, label, a, b):
        if phase < goal and events[phase][0] == label and events[phase][1](a, b):
            return phase + 1
        return phase

    if not isinstance(ts, GraphTraceSet):
        for t in ts:
            if t.status != T or not start_ok(t.start):
                continue
            phase = 0
            for label, a, b in t.chained():
                if label == PI and not pi_ok(a, b):
                    break
                phase = advance(phase, label, a, b)
            else:
                if phase == goal:
                    return t
        return None
    g = ts.graph
    frontier = [(root, s, 0, s, ()) for s, root in enumerate(ts.roots) if start_ok(s)]
    seen = set()
    for _ in range(ts.depth + 1):
        hits = [(start, steps) for node, _s, phase, start, steps in frontier
                if phase == goal and g.term[node]]
        if hits:
            start, steps = min(hits)
            return Trace(start, steps, T)
        nxt = []
        for node, cur, phase, start, steps in frontier:
            for key, child in g.edges[node]:
                label, post = divmod(key, n)
                if label == PI and not pi_ok(cur, post):
                    continue
                ph = advance(phase, label, cur, post)
                if (child, post, ph) in seen:
                    continue
                seen.add((child, post, ph))
                nxt.append((child, post, ph, start, steps + ((label, post),)))
        frontier = nxt
    return None


def early_exit_witness(cfg: RemoveConfig, space: StateSpace | None = None) -> Trace | None:
    """A run that enters the loop body, then loses ``i`` to the environment
    while the code itself never changes ``w`` (the CAS fails), and still exits."""
    space = space or remove_space(cfg)
    code = Conj(rely(space, remove_rely(space, cfg)), remove_code(cfg, space))
    ts = denote(space, code, cfg.depth, cfg.engine)
    val = space.value

    def has_i(s):
        return cfg.i in val(s, W).items

    return _witness_search(
        ts,
        start_ok=has_i,
        events=(
            (PI, lambda a, b: val(a, SAMPLE) != val(b, SAMPLE)),  # sample := *w
            (ENV, lambda a, b: has_i(a) and not has_i(b)),
        ),
        pi_ok=lambda a, b: val(a, W) == val(b, W),
    )


# -- reports --------------------------------------------------------------------


@dataclass
class RemoveReport:
    config: RemoveConfig
    while_theorem: Verdict
    guarantee: Verdict
    refinement: Verdict
    witness: Trace | None
    elapsed: float = 0.0
    space: StateSpace | None = field(default=None, repr=False)

    @property
    def obligations(self) -> dict:
        return self.while_theorem.obligations

    @property
    def ok(self) -> bool:
        return (self.while_theorem.holds and self.guarantee.holds and self.refinement.holds
                and self.witness is not None)

    def failing(self) -> list[str]:
        out = [k for k, v in self.obligations.items() if not v.holds]
        if not self.guarantee.holds:
            out.append("guarantee")
        if not self.refinement.holds:
            out.append("refinement")
        if self.witness is None:
            out.append("witness")
        return out

    def lines(self) -> list[str]:
        rows = [f"{k}: {v.outcome}" for k, v in self.obligations.items()]
        rows.append(f"guarantee: {self.guarantee.outcome}")
        rows.append(f"spec refined by code: {self.refinement.outcome}")
        if self.witness is None:
            rows.append("early-exit witness: none found")
        else:
            rows.append("early-exit witness: " + self.witness.pretty(self.space))
        return rows


def verify_remove(cfg: RemoveConfig | None = None) -> RemoveReport:
    """Run the while rule, the guarantee check and the spec refinement."""
    cfg = cfg or RemoveConfig()
    t0 = time.perf_counter()
    space = remove_space(cfg)
    inst = remove_while_instance(cfg, space)
    thm = check_while_theorem(space, inst, cfg.engine)
    code = remove_code(cfg, space)
    # env steps are restricted to the rely rather than aborting on a breach:
    # an abort would otherwise count as a guarantee violation
    g = satisfies_guarantee(space, Conj(env_within(space, remove_rely(space, cfg)), code),
                            remove_guarantee(space, cfg), cfg.depth, cfg.engine)
    ref = refines(space, remove_spec(cfg, space), code, cfg.depth, cfg.engine)
    wit = early_exit_witness(cfg, space)
    return RemoveReport(cfg, thm, g, ref, wit, time.perf_counter() - t0, space)


@dataclass
class FairnessReport:
    config: RemoveConfig
    checks: dict

    @property
    def ok(self) -> bool:
        return all(v.holds for v in self.checks.values())


def fairness_demo(cfg: RemoveConfig | None = None) -> FairnessReport:
    """Depth-bounded chain: fair code stays within fair termination, which is
    exactly a finite run of arbitrary steps."""
    cfg = cfg or RemoveConfig(depth=4)
    space = remove_space(cfg)
    n, kind = cfg.depth, cfg.engine
    t, f = term(space), fair(space)
    code = remove_code(cfg, space)
    spec_body = Conj(guar(space, remove_guarantee(space, cfg)),
                     post_spec(space, space.rel_where(lambda a, b: cfg.i not in _w(b))))
    checks = {
        "spec body terminates": refines(space, t, spec_body, n, kind),
        "fair code within fair termination": refines(space, Conj(t, f), Conj(code, f), n, kind),
        "fair termination is finite stepping": equals(space, Conj(t, f), any_steps(space), n, kind),
    }
    return FairnessReport(cfg, checks)


__all__ = [
    "FairnessReport", "RemoveConfig", "RemoveReport", "early_exit_witness", "fairness_demo",
    "remove_body", "remove_code", "remove_guarantee", "remove_guard", "remove_rely",
    "remove_space", "remove_spec", "remove_while_instance", "removed", "verify_remove",
]
