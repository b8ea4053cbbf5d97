"""Seeded random commands and relations."""
from __future__ import annotations

import random

from ..language import (
    BOT, TOP, Choice, Command, Conj, Env, Mu, Nu, Par, Pgm, Seq, Test, Var, nil, size,
)
from ..state_model import StateSpace

DEFAULT_SEED = 2024


def rng_for(seed: int | None, *salt) -> random.Random:
    """Independent stream per (seed, salt); stable across runs and platforms."""
    base = DEFAULT_SEED if seed is None else seed
    return random.Random(repr((base,) + salt))


def random_set(space: StateSpace, rng: random.Random, p: float = 0.5) -> frozenset:
    return frozenset(i for i in range(space.size) if rng.random() < p)


def random_relation(space: StateSpace, rng: random.Random, density: float = 0.35) -> frozenset:
    return frozenset(pair for pair in sorted(space.univ) if rng.random() < density)


def _leaf(space, rng, binders):
    roll = rng.random()
    if binders and roll < 0.25:
        return Var(rng.choice(binders))
    kind = rng.choices(("bot", "top", "nil", "test", "pgm", "env"), (1, 1, 1, 2, 4, 4))[0]
    if kind == "bot":
        return BOT
    if kind == "top":
        return TOP
    if kind == "nil":
        return nil(space)
    if kind == "test":
        return Test(random_set(space, rng))
    rel = random_relation(space, rng, rng.choice((0.2, 0.4, 0.6)))
    return Pgm(rel) if kind == "pgm" else Env(rel)


def _gen(space, rng, budget, binders):
    if budget <= 1 or rng.random() < 0.08:
        return _leaf(space, rng, binders)
    if budget == 2:
        x = f"x{len(binders)}"
        return rng.choice((Mu, Nu))(x, _leaf(space, rng, binders + (x,)))
    op = rng.choices(("choice", "seq", "par", "conj", "mu", "nu"), (3, 3, 2, 2, 1, 1))[0]
    if op in ("mu", "nu"):
        x = f"x{len(binders)}"
        if budget >= 6 and rng.random() < 0.6:
            # iteration shape: exit branch, or a step followed by recursion
            exit_ = _gen(space, rng, rng.randint(1, budget - 5), binders)
            step = _gen(space, rng, budget - 4 - size(exit_), binders)
            body = Choice((exit_, Seq(step, Var(x))))
        else:
            body = _gen(space, rng, budget - 1, binders + (x,))
        return (Mu if op == "mu" else Nu)(x, body)
    a = _gen(space, rng, rng.randint(1, budget - 2), binders)
    b = _gen(space, rng, budget - 1 - size(a), binders)
    if op == "choice":
        return Choice((a, b))
    if op == "seq":
        return Seq(a, b)
    if op == "par":
        return Par(a, b)
    return Conj(a, b)


def random_command(space: StateSpace, rng: random.Random, max_size: int = 8) -> Command:
    """Closed command with at most ``max_size`` constructors."""
    c = _gen(space, rng, max_size, ())
    assert size(c) <= max_size
    return c
