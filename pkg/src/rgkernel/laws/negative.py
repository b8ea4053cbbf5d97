"""Negative control: the sequential while rule breaks under interference.

Instance: ``x ∈ {0,1}``, loop ``while *x = 1 do x := 0 od``, invariant Σ,
variant ``*x`` under ``<``.  The sequential premise
``{p ∧ b ∧ z = k} c {p ∧ z < k}`` holds, yet the sequential conclusion
``{p} loop {p ∧ ¬b}`` fails once the environment may set ``x`` back to 1
after the guard has been read as false.  With an identity rely the same
conclusion holds.
"""
from __future__ import annotations

import time

from ..language import (
    Binary, Conj, Mu, Nu, VariantSpec, assignment, const, deref, nil, rely, while_body,
    while_loop,
)
from ..refinement import hoare_triple
from ..semantics import Engine, denote
from ..state_model import Base, StateSpace, int_range
from ..verdict import Outcome, Verdict
from .theorems import fact


def hoare_loop_space() -> StateSpace:
    return StateSpace([(Base("x"), int_range(0, 1))])


def _parts(space):
    x = Base("x")
    guard = Binary(deref("x"), "=", const(1))
    body = assignment(space, x, const(0))
    one = space.set_where(lambda m: m[x].value == 1)
    variant = VariantSpec.less_than(space, deref("x"))
    return guard, body, one, variant


def negative_control_hoare_loop(rely_kind: str = "univ", depth: int = 5,
                                engine=Engine.GRAPH) -> Verdict:
    """Check the sequential loop rule's conclusion for the control instance.

    ``rely_kind`` is ``"univ"`` (arbitrary interference, expected to fail)
    or ``"identity"`` (no interference, expected to hold).
    """
    kind = engine if isinstance(engine, Engine) else Engine(str(engine))
    t0 = time.perf_counter()
    space = hoare_loop_space()
    r = {"univ": space.univ, "identity": space.identity}[rely_kind]
    guard, body, one, z = _parts(space)
    p = space.all
    ctx = rely(space, r)

    obligations = {}
    for k in z.carrier:
        pre = p & one & z.eq_set(space, k)
        obligations[f"sequential-premise {k}"] = hoare_triple(
            space, pre, Conj(ctx, body), p & z.lt_set(space, k), depth, kind)
    loop = while_loop(space, guard, body)
    concl = hoare_triple(space, p, Conj(ctx, loop), p - one, depth, kind)
    obligations["conclusion"] = concl

    # a loop whose iterations may take no transition: the greatest fixed point
    # admits abort, the least one does not, so terminated-trace sets differ
    spin = "w0"
    spin_body = while_body(space, guard, nil(space), spin)
    gfp = denote(space, Nu(spin, spin_body), depth, kind)
    lfp = denote(space, Mu(spin, spin_body), depth, kind)
    obligations["fixpoint-gap"] = fact(gfp.traces() != lfp.traces(), depth, kind,
                                       "stuttering loop: greatest and least fixed points differ")

    elapsed = time.perf_counter() - t0
    premises_ok = all(v.holds for n, v in obligations.items() if n.startswith("sequential"))
    if not premises_ok:
        return Verdict(Outcome.PREMISE_VIOLATION, depth, kind, elapsed=elapsed,
                       detail="sequential premise does not hold", obligations=obligations)
    if concl.holds:
        return Verdict(Outcome.HOLDS, depth, kind, elapsed=elapsed,
                       detail=f"sequential loop rule sound under rely {rely_kind}",
                       obligations=obligations)
    return Verdict(Outcome.FAILS, depth, kind, concl.counterexample, elapsed,
                   detail=f"sequential loop rule violated under rely {rely_kind}",
                   obligations=obligations)
