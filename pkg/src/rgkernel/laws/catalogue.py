"""Catalogue of algebraic laws, each checkable at a concrete binding.

A law is an equality or refinement between two commands built from a
binding of its metavariables.  Conditional laws carry premises: an instance
whose premises fail holds vacuously and is reported as such.
"""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Callable

from ..language import (
    BOT, TOP, Choice, Command, Conj, Env, Par, Pgm, Seq, Test, any_steps, assert_,
    assert_alt, fair, fin, idle, nil, post_spec, rely, term,
)
from ..refinement import equals, refines
from ..semantics import Engine
from ..state_model import (
    StateSpace, compose, range_restrict, refl_trans_closure, stable_closure, tolerates,
)
from ..verdict import Outcome, Verdict
from .generators import random_command, random_relation, random_set

# metavariable sorts
SET, REL, CMD, FAMILY = "set", "rel", "cmd", "family"


@dataclass(frozen=True)
class Law:
    id: str
    summary: str
    sorts: tuple  # ((name, sort), ...)
    build: Callable  # (space, b) -> (lhs, rhs)
    relation: str = "equal"  # or "refine": lhs ⊒ rhs
    premises: Callable | None = None  # (space, b, depth, engine) -> list[(name, Verdict|bool)]


@dataclass
class LawInstance:
    law_id: str
    bindings: dict
    depth: int = 4
    space: StateSpace | None = None

    def describe(self) -> str:
        def show(v):
            if isinstance(v, frozenset):
                return "{" + ",".join(map(str, sorted(v))) + "}"
            if isinstance(v, tuple):
                return "[" + ", ".join(show(x) for x in v) + "]"
            return str(v)

        parts = ", ".join(f"{k}={show(v)}" for k, v in self.bindings.items())
        return f"{self.law_id}({parts}) @ depth {self.depth}"


# -- builders ----------------------------------------------------------------


def _assert_union_premises(space, b, depth, engine):
    c, d = b["c"], b["d"]
    return [
        (f"assert-{name};c refines d", refines(space, Seq(assert_(space, b[name]), c), d, depth, engine))
        for name in ("p1", "p2")
    ]


def _assert_family_premises(space, b, depth, engine):
    c, d = b["c"], b["d"]
    return [
        (f"member {i}", refines(space, Seq(assert_(space, p), c), d, depth, engine))
        for i, p in enumerate(b["P"])
    ]


def _tolerates_premise(space, b, depth, engine):
    return [("q tolerates r from p", tolerates(b["q"], b["r"], b["p"]))]


def _union_all(space, family):
    out = frozenset()
    for p in family:
        out |= p
    return out


def _build_laws() -> dict[str, Law]:
    laws = [
        Law("assert-alt", "assert p = test p or (test not-p ; top)", (("p", SET),),
            lambda s, b: (assert_(s, b["p"]), assert_alt(s, b["p"]))),
        Law("assert-merge", "assert p1 ; assert p2 = assert (p1 & p2)", (("p1", SET), ("p2", SET)),
            lambda s, b: (Seq(assert_(s, b["p1"]), assert_(s, b["p2"])),
                          assert_(s, b["p1"] & b["p2"]))),
        Law("assert-test", "assert p ; test p = assert p", (("p", SET),),
            lambda s, b: (Seq(assert_(s, b["p"]), Test(b["p"])), assert_(s, b["p"]))),
        Law("assert-union", "per-part refinement lifts to the union of preconditions",
            (("p1", SET), ("p2", SET), ("c", CMD), ("d", CMD)),
            lambda s, b: (Seq(assert_(s, b["p1"] | b["p2"]), b["c"]), b["d"]),
            relation="refine", premises=_assert_union_premises),
        Law("assert-Union", "per-member refinement lifts to the union of a family",
            (("P", FAMILY), ("c", CMD), ("d", CMD)),
            lambda s, b: (Seq(assert_(s, _union_all(s, b["P"])), b["c"]), b["d"]),
            relation="refine", premises=_assert_family_premises),
        Law("spec-test", "post (q restricted to p) = post q ; test p", (("q", REL), ("p", SET)),
            lambda s, b: (post_spec(s, range_restrict(b["q"], b["p"])),
                          Seq(post_spec(s, b["q"]), Test(b["p"])))),
        Law("spec-split", "post (r1 o r2) refined by post (r1 to p) ; assert p ; post r2",
            (("r1", REL), ("r2", REL), ("p", SET)),
            lambda s, b: (post_spec(s, compose(b["r1"], b["r2"])),
                          Seq(post_spec(s, range_restrict(b["r1"], b["p"])),
                              Seq(assert_(s, b["p"]), post_spec(s, b["r2"])))),
            relation="refine"),
        Law("rely-distrib-seq", "rely distributes over sequential composition",
            (("r", REL), ("c1", CMD), ("c2", CMD)),
            lambda s, b: (Conj(rely(s, b["r"]), Seq(b["c1"], b["c2"])),
                          Seq(Conj(rely(s, b["r"]), b["c1"]), Conj(rely(s, b["r"]), b["c2"])))),
        Law("spec-tolerates", "idle may surround a tolerant specification",
            (("q", REL), ("r", REL), ("p", SET)),
            lambda s, b: (Conj(rely(s, b["r"]), Seq(assert_(s, b["p"]), post_spec(s, b["q"]))),
                          Conj(rely(s, b["r"]), Seq(assert_(s, b["p"]),
                                                    Seq(idle(s), Seq(post_spec(s, b["q"]), idle(s)))))),
            premises=_tolerates_premise),
        # operator algebra
        Law("seq-assoc", "sequential composition is associative",
            (("c1", CMD), ("c2", CMD), ("c3", CMD)),
            lambda s, b: (Seq(Seq(b["c1"], b["c2"]), b["c3"]), Seq(b["c1"], Seq(b["c2"], b["c3"])))),
        Law("seq-nil", "nil is a unit of sequential composition", (("c", CMD),),
            lambda s, b: (Seq(nil(s), b["c"]), Seq(b["c"], nil(s)))),
        Law("seq-nil-left", "nil ; c = c", (("c", CMD),),
            lambda s, b: (Seq(nil(s), b["c"]), b["c"])),
        Law("seq-top", "top ; c = top", (("c", CMD),),
            lambda s, b: (Seq(TOP, b["c"]), TOP)),
        Law("seq-distrib-left", "(c or d) ; e = c ; e or d ; e", (("c", CMD), ("d", CMD), ("e", CMD)),
            lambda s, b: (Seq(Choice((b["c"], b["d"])), b["e"]),
                          Choice((Seq(b["c"], b["e"]), Seq(b["d"], b["e"]))))),
        Law("seq-distrib-right", "e ; (c or d) = e ; c or e ; d", (("c", CMD), ("d", CMD), ("e", CMD)),
            lambda s, b: (Seq(b["e"], Choice((b["c"], b["d"]))),
                          Choice((Seq(b["e"], b["c"]), Seq(b["e"], b["d"]))))),
        Law("par-comm", "parallel composition is commutative", (("c", CMD), ("d", CMD)),
            lambda s, b: (Par(b["c"], b["d"]), Par(b["d"], b["c"]))),
        Law("par-assoc", "parallel composition is associative", (("c1", CMD), ("c2", CMD), ("c3", CMD)),
            lambda s, b: (Par(Par(b["c1"], b["c2"]), b["c3"]), Par(b["c1"], Par(b["c2"], b["c3"])))),
        Law("conj-comm", "weak conjunction is commutative", (("c", CMD), ("d", CMD)),
            lambda s, b: (Conj(b["c"], b["d"]), Conj(b["d"], b["c"]))),
        Law("conj-assoc", "weak conjunction is associative", (("c1", CMD), ("c2", CMD), ("c3", CMD)),
            lambda s, b: (Conj(Conj(b["c1"], b["c2"]), b["c3"]), Conj(b["c1"], Conj(b["c2"], b["c3"])))),
        Law("conj-idem", "weak conjunction is idempotent", (("c", CMD),),
            lambda s, b: (Conj(b["c"], b["c"]), b["c"])),
        Law("conj-top", "top absorbs weak conjunction", (("c", CMD),),
            lambda s, b: (Conj(TOP, b["c"]), TOP)),
        Law("choice-comm", "choice is commutative", (("c", CMD), ("d", CMD)),
            lambda s, b: (Choice((b["c"], b["d"])), Choice((b["d"], b["c"])))),
        Law("choice-assoc", "choice is associative", (("c1", CMD), ("c2", CMD), ("c3", CMD)),
            lambda s, b: (Choice((Choice((b["c1"], b["c2"])), b["c3"])),
                          Choice((b["c1"], Choice((b["c2"], b["c3"])))))),
        Law("choice-idem", "choice is idempotent", (("c", CMD),),
            lambda s, b: (Choice((b["c"], b["c"])), b["c"])),
        Law("choice-bot", "bot is a unit of choice", (("c", CMD),),
            lambda s, b: (Choice((b["c"], BOT)), b["c"])),
        Law("choice-join", "a choice refines to either branch", (("c", CMD), ("d", CMD)),
            lambda s, b: (Choice((b["c"], b["d"])), b["c"]), relation="refine"),
        Law("bot-least", "every command refines to bot", (("c", CMD),),
            lambda s, b: (b["c"], BOT), relation="refine"),
        Law("term-fair", "term conjoined with fair is finite iteration of any step", (),
            lambda s, b: (Conj(term(s), fair(s)), any_steps(s))),
    ]
    return {law.id: law for law in laws}


LAWS: dict[str, Law] = _build_laws()

ALGEBRA = tuple(
    i for i in LAWS
    if i.split("-")[0] in ("seq", "par", "conj", "choice", "bot")
)


def law_ids() -> list[str]:
    return list(LAWS)


def get_law(law_id: str) -> Law:
    try:
        return LAWS[law_id]
    except KeyError:
        raise KeyError(f"unknown law {law_id!r}; known: {', '.join(LAWS)}") from None


def check_law(space: StateSpace, inst: LawInstance, engine=Engine.GRAPH) -> Verdict:
    law = get_law(inst.law_id)
    kind = engine if isinstance(engine, Engine) else Engine(str(engine))
    t0 = time.perf_counter()
    missing = [n for n, _ in law.sorts if n not in inst.bindings]
    if missing:
        raise ValueError(f"{inst.law_id}: unbound metavariables {missing}")
    if law.premises is not None:
        for name, res in law.premises(space, inst.bindings, inst.depth, kind):
            ok = res if isinstance(res, bool) else res.holds
            if isinstance(res, Verdict) and res.outcome is Outcome.INCONCLUSIVE:
                return Verdict(Outcome.INCONCLUSIVE, inst.depth, kind,
                               elapsed=time.perf_counter() - t0, detail=f"premise {name}")
            if not ok:
                return Verdict(Outcome.HOLDS, inst.depth, kind, elapsed=time.perf_counter() - t0,
                               detail=f"vacuous: premise {name} does not hold")
    lhs, rhs = law.build(space, inst.bindings)
    check = equals if law.relation == "equal" else refines
    v = check(space, lhs, rhs, inst.depth, kind)
    v.elapsed = time.perf_counter() - t0
    if not v.holds and not v.detail.startswith(inst.law_id):
        v.detail = f"{inst.describe()}: {v.detail}"
    return v


# -- bindings ----------------------------------------------------------------


def all_sets(space: StateSpace) -> list[frozenset]:
    n = space.size
    return [frozenset(i for i in range(n) if mask >> i & 1) for mask in range(1 << n)]


def all_relations(space: StateSpace) -> list[frozenset]:
    pairs = sorted(space.univ)
    return [
        frozenset(p for j, p in enumerate(pairs) if mask >> j & 1)
        for mask in range(1 << len(pairs))
    ]


def command_pool(space: StateSpace) -> list[Command]:
    """Small, varied commands used for exhaustive command metavariables."""
    n = space.size
    first = frozenset({0})
    step = frozenset((a, (a + 1) % n) for a in range(n))
    return [
        BOT,
        TOP,
        nil(space),
        Test(first),
        Pgm(space.univ),
        Env(step),
        Choice((Test(first), Seq(Pgm(step), Env(space.identity)))),
        Seq(Test(space.all - first), TOP),
        fin(space, Pgm(step)),
    ]


def _choices(space, sort, pool_cmds, sets, rels):
    if sort == SET:
        return sets
    if sort == REL:
        return rels
    if sort == CMD:
        return pool_cmds
    if sort == FAMILY:
        # every family of two sets, including repeats collapsed
        return [tuple(f) for f in itertools.combinations(sets, 2)] + [(p,) for p in sets]
    raise ValueError(sort)


def exhaustive_instances(space: StateSpace, law_id: str, depth: int = 4):
    """Every binding over all sets/relations of ``space`` and the command pool."""
    law = get_law(law_id)
    pool = command_pool(space)
    sets, rels = all_sets(space), all_relations(space)
    domains = [_choices(space, sort, pool, sets, rels) for _, sort in law.sorts]
    for combo in itertools.product(*domains):
        yield LawInstance(law_id, dict(zip((n for n, _ in law.sorts), combo)), depth, space)


def random_instance(space: StateSpace, law_id: str, rng: random.Random, depth: int = 4,
                    cmd_size: int = 5) -> LawInstance:
    law = get_law(law_id)
    b = {}
    for name, sort in law.sorts:
        if sort == SET:
            b[name] = random_set(space, rng)
        elif sort == REL:
            b[name] = random_relation(space, rng)
        elif sort == CMD:
            b[name] = random_command(space, rng, rng.randint(1, cmd_size))
        else:
            b[name] = tuple(random_set(space, rng) for _ in range(rng.randint(1, 3)))
    if law_id == "spec-tolerates" and rng.random() < 0.7:
        # bias towards instances whose side condition holds
        r = b["r"]
        star = refl_trans_closure(r, space)
        b["q"] = compose(compose(star, b["q"]), star)
        b["p"] = stable_closure(b["p"], r)
    return LawInstance(law_id, b, depth, space)


@dataclass
class SweepResult:
    law_id: str
    checked: int = 0
    vacuous: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def sweep_law(space: StateSpace, law_id: str, instances, engine=Engine.GRAPH) -> SweepResult:
    res = SweepResult(law_id)
    for inst in instances:
        v = check_law(space, inst, engine)
        res.checked += 1
        if v.detail.startswith("vacuous"):
            res.vacuous += 1
        if not v.holds:
            res.failures.append((inst, v))
    return res


__all__ = [
    "ALGEBRA", "LAWS", "Law", "LawInstance", "SweepResult", "all_relations", "all_sets",
    "check_law", "command_pool", "exhaustive_instances", "get_law", "law_ids",
    "random_command", "random_instance", "random_relation", "random_set", "sweep_law",
]
