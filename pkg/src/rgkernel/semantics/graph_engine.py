"""Shared acceptor graph engine.

A node is ``(may_terminate, aborts, edges)`` where ``edges`` is a sorted tuple
of ``(edge_key, child)`` and ``edge_key = label * |Σ| + post``.  The node does
not store its current state; that is implied by the path from the root.  A
denotation is one root per start state.  Nodes and denotations are
hash-consed into integer ids and every operator is memoized on ids, so shared
sub-behaviour is built once.

The language of a root is exactly the canonical trace set the enum engine
produces: an aborting node has no edges and cannot terminate, and the
baseline/prefix traces are implicit in every path.
"""
from __future__ import annotations

import sys
import threading
from collections import deque

from ..language import (
    Bot, Choice, Command, Conj, Env, Mu, Nu, Par, Pgm, Seq, Test, Top, Var,
)
from ..state_model import StateSpace
from .enum_engine import FixpointDivergence, ResourceLimit, iteration_cap
from .traces import A, ENV, I, PI, T, Engine, Trace, TraceSet, trace_key

DEFAULT_NODE_CAP = 4_000_000

STUCK, DONE, ABORT = 0, 1, 2


class GraphTraceSet(TraceSet):
    engine = Engine.GRAPH

    def __init__(self, engine: "GraphEngine", den: int):
        self.space = engine.space
        self.depth = engine.depth
        self.graph = engine
        self.den = den
        self._cache = None

    @property
    def roots(self) -> tuple:
        return self.graph.dens[self.den]

    def traces(self) -> frozenset:
        if self._cache is None:
            self._cache = self.graph.enumerate(self.den)
        return self._cache

    def __eq__(self, other) -> bool:
        if isinstance(other, GraphTraceSet) and other.graph is self.graph:
            return self.den == other.den
        return super().__eq__(other)

    __hash__ = TraceSet.__hash__

    def final_states(self, starts=None) -> frozenset:
        return self.graph.final_states(self.den, starts)


class GraphEngine:
    kind = Engine.GRAPH

    def __init__(self, space: StateSpace, depth: int, node_cap: int = DEFAULT_NODE_CAP):
        if depth < 0:
            raise ValueError("depth must be non-negative")
        self.space = space
        self.depth = depth
        self.node_cap = node_cap
        self.lock = threading.RLock()
        self.clear_caches()

    def clear_caches(self) -> None:
        self.term: list[bool] = []
        self.abort: list[bool] = []
        self.edges: list[tuple] = []
        self.height: list[int] = []
        self._nodes: dict = {}
        self.dens: list[tuple] = []
        self._dens: dict = {}
        self._union: dict = {}
        self._trunc: dict = {}
        self._seq: dict = {}
        self._par: dict = {}
        self._conj: dict = {}
        self._covers: dict = {}
        self._memo: dict = {}
        assert self.mk(False, False, ()) == STUCK
        assert self.mk(True, False, ()) == DONE
        assert self.mk(False, True, ()) == ABORT
        n = self.space.size
        self.bot = self.mk_den((STUCK,) * n)
        self.top = self.mk_den((ABORT,) * n)

    @property
    def node_count(self) -> int:
        return len(self.term)

    # -- hash-consing --------------------------------------------------------

    def mk(self, term: bool, abort: bool, edges: tuple) -> int:
        if abort:
            term, edges = False, ()
        key = (term, abort, edges)
        nid = self._nodes.get(key)
        if nid is None:
            nid = len(self.term)
            if nid >= self.node_cap:
                raise ResourceLimit(f"graph node cap {self.node_cap} exceeded")
            self._nodes[key] = nid
            self.term.append(term)
            self.abort.append(abort)
            self.edges.append(edges)
            self.height.append(1 + max((self.height[c] for _, c in edges), default=-1))
        return nid

    def mk_den(self, roots: tuple) -> int:
        did = self._dens.get(roots)
        if did is None:
            did = len(self.dens)
            self._dens[roots] = did
            self.dens.append(roots)
        return did

    # -- node operators ------------------------------------------------------

    def union(self, a: int, b: int) -> int:
        if a == b or b == STUCK:
            return a
        if a == STUCK:
            return b
        if a > b:
            a, b = b, a
        key = (a, b)
        hit = self._union.get(key)
        if hit is not None:
            return hit
        if self.abort[a] or self.abort[b]:
            res = ABORT
        else:
            ea, eb = self.edges[a], self.edges[b]
            merged = dict(ea)
            for k, c in eb:
                merged[k] = self.union(merged[k], c) if k in merged else c
            res = self.mk(self.term[a] or self.term[b], False, tuple(sorted(merged.items())))
        self._union[key] = res
        return res

    def truncate(self, a: int, rem: int) -> int:
        if self.height[a] <= rem:
            return a
        key = (a, rem)
        hit = self._trunc.get(key)
        if hit is not None:
            return hit
        if rem == 0:
            res = self.mk(self.term[a], False, ())
        else:
            res = self.mk(
                self.term[a], False,
                tuple((k, self.truncate(c, rem - 1)) for k, c in self.edges[a]),
            )
        self._trunc[key] = res
        return res

    def seq(self, a: int, state: int, d: int, rem: int) -> int:
        """Glue denotation ``d`` onto every terminating point of ``a``."""
        if a == STUCK or a == ABORT:
            return a
        term = self.term[a]
        key = (a, state if term else -1, d, rem)
        hit = self._seq.get(key)
        if hit is not None:
            return hit
        n = self.space.size
        edges = tuple(
            (k, self.seq(c, k % n, d, rem - 1)) for k, c in self.edges[a]
        )
        res = self.mk(False, False, edges)
        if term:
            res = self.union(res, self.truncate(self.dens[d][state], rem))
        self._seq[key] = res
        return res

    def par(self, a: int, b: int) -> int:
        if self.abort[a] or self.abort[b]:
            return ABORT
        if a > b:
            a, b = b, a
        key = (a, b)
        hit = self._par.get(key)
        if hit is not None:
            return hit
        n = self.space.size
        by_post: dict[int, list] = {}
        for k, c in self.edges[b]:
            by_post.setdefault(k % n, []).append((k // n, c))
        out: dict[int, int] = {}
        for k, ca in self.edges[a]:
            la, post = divmod(k, n)
            for lb, cb in by_post.get(post, ()):
                if la == PI and lb == PI:
                    continue
                lab = PI if PI in (la, lb) else ENV
                ek = lab * n + post
                child = self.par(ca, cb)
                out[ek] = self.union(out[ek], child) if ek in out else child
        res = self.mk(self.term[a] and self.term[b], False, tuple(sorted(out.items())))
        self._par[key] = res
        return res

    def conj(self, a: int, b: int) -> int:
        if self.abort[a] or self.abort[b]:
            return ABORT
        if a == b:
            return a
        if a > b:
            a, b = b, a
        key = (a, b)
        hit = self._conj.get(key)
        if hit is not None:
            return hit
        eb = dict(self.edges[b])
        edges = tuple(
            (k, self.conj(c, eb[k])) for k, c in self.edges[a] if k in eb
        )
        res = self.mk(self.term[a] and self.term[b], False, edges)
        self._conj[key] = res
        return res

    # -- denotations ---------------------------------------------------------

    def test(self, p) -> int:
        return self.mk_den(tuple(DONE if s in p else STUCK for s in range(self.space.size)))

    def step(self, label: int, r) -> int:
        n = self.space.size
        if self.depth < 1:
            return self.bot
        succ: dict[int, list] = {}
        for a, b in r:
            succ.setdefault(a, []).append(b)
        return self.mk_den(tuple(
            self.mk(False, False, tuple((label * n + b, DONE) for b in sorted(succ.get(s, ()))))
            for s in range(n)
        ))

    def den_union(self, x: int, y: int) -> int:
        rx, ry = self.dens[x], self.dens[y]
        return self.mk_den(tuple(self.union(a, b) for a, b in zip(rx, ry)))

    def den_seq(self, x: int, y: int) -> int:
        return self.mk_den(tuple(
            self.seq(a, s, y, self.depth) for s, a in enumerate(self.dens[x])
        ))

    def den_par(self, x: int, y: int) -> int:
        return self.mk_den(tuple(self.par(a, b) for a, b in zip(self.dens[x], self.dens[y])))

    def den_conj(self, x: int, y: int) -> int:
        return self.mk_den(tuple(self.conj(a, b) for a, b in zip(self.dens[x], self.dens[y])))

    def denote(self, c: Command, env: dict | None = None) -> int:
        env = env or {}
        fv = c.free_vars
        key = (c, tuple(sorted((b, env[b]) for b in fv)) if fv else ())
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        res = self._denote(c, env)
        self._memo[key] = res
        return res

    def _denote(self, c: Command, env: dict) -> int:
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
            out = self.bot
            for b in c.branches:
                out = self.den_union(out, self.denote(b, env))
            return out
        if isinstance(c, Seq):
            return self.den_seq(self.denote(c.first, env), self.denote(c.second, env))
        if isinstance(c, Par):
            return self.den_par(self.denote(c.left, env), self.denote(c.right, env))
        if isinstance(c, Conj):
            return self.den_conj(self.denote(c.left, env), self.denote(c.right, env))
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

    def trace_set(self, c: Command) -> GraphTraceSet:
        with self.lock:
            return GraphTraceSet(self, self.denote(c))

    # -- queries -------------------------------------------------------------

    def enumerate(self, den: int) -> frozenset:
        n = self.space.size
        out = set()

        def walk(node, start, path):
            out.add(Trace(start, path, I))
            if self.term[node]:
                out.add(Trace(start, path, T))
            if self.abort[node]:
                out.add(Trace(start, path, A))
            for k, c in self.edges[node]:
                lab, post = divmod(k, n)
                walk(c, start, path + ((PI if lab == PI else ENV, post),))

        for s, root in enumerate(self.dens[den]):
            walk(root, s, ())
        return frozenset(out)

    def final_states(self, den: int, starts=None) -> frozenset:
        n = self.space.size
        starts = range(n) if starts is None else starts
        out = set()
        seen = set()
        stack = [(self.dens[den][s], s) for s in starts]
        while stack:
            node, st = stack.pop()
            if (node, st) in seen:
                continue
            seen.add((node, st))
            if self.term[node]:
                out.add(st)
            for k, c in self.edges[node]:
                stack.append((c, k % n))
        return frozenset(out)

    def covers(self, a: int, b: int) -> bool:
        """Every path of ``b`` is covered by ``a`` (abort closure included)."""
        if a == b or self.abort[a]:
            return True
        if self.abort[b]:
            return False
        key = (a, b)
        hit = self._covers.get(key)
        if hit is not None:
            return hit
        res = True
        if self.term[b] and not self.term[a]:
            res = False
        else:
            ea = dict(self.edges[a])
            for k, cb in self.edges[b]:
                ca = ea.get(k)
                if ca is None or not self.covers(ca, cb):
                    res = False
                    break
        self._covers[key] = res
        return res

    def uncovered(self, c: GraphTraceSet, d: GraphTraceSet) -> Trace | None:
        """Shortest trace of ``d`` outside the abort closure of ``c``.

        Breadth-first over node pairs in edge-key order, so the first failure
        found is minimal under ``trace_key``.
        """
        rc, rd = c.roots, d.roots
        if all(self.covers(a, b) for a, b in zip(rc, rd)):
            return None
        n = self.space.size
        queue = deque((s, (), rc[s], rd[s]) for s in range(n))
        seen = set()
        while queue:
            level = []
            while queue:
                level.append(queue.popleft())
            for s, path, a, b in level:
                bad = self._local_failure(a, b)
                if bad is not None:
                    return Trace(s, path, bad)
            for s, path, a, b in level:
                if a is not None and self.abort[a]:
                    continue
                if (a, b) in seen:
                    continue
                seen.add((a, b))
                ea = dict(self.edges[a]) if a is not None else {}
                for k, cb in self.edges[b]:
                    lab, post = divmod(k, n)
                    step = (PI if lab == PI else ENV, post)
                    queue.append((s, path + (step,), ea.get(k), cb))
        raise AssertionError("containment failed but no counterexample found")

    def _local_failure(self, a, b):
        if a is None:
            # ``c`` cannot follow the path at all; report the most specific status
            if self.term[b]:
                return T
            if self.abort[b]:
                return A
            return I
        if self.abort[a]:
            return None
        if self.abort[b]:
            return A
        if self.term[b] and not self.term[a]:
            return T
        return None

    def guarantee_violation(self, den: int, g) -> Trace | None:
        """Key-minimal trace exhibiting a program step outside ``g``.

        An aborting point counts as a violation: abort closure admits any
        continuation, including a bad program step when depth allows.
        """
        n = self.space.size
        bad_step = bad_successor(n, g)
        best = None
        level = [(s, (), self.dens[den][s]) for s in range(n)]
        seen = set()
        while level and (best is None or len(level[0][1]) < len(best.steps)):
            nxt = []
            for s, path, node in level:
                cur = path[-1][1] if path else s
                if self.abort[node]:
                    if len(path) < self.depth and cur in bad_step:
                        cand = Trace(s, path + ((PI, bad_step[cur]),), I)
                    else:
                        cand = Trace(s, path, A)
                    best = _better(best, cand)
                    continue
                for k, c in self.edges[node]:
                    lab, post = divmod(k, n)
                    step = (PI if lab == PI else ENV, post)
                    if lab == PI and (cur, post) not in g:
                        best = _better(best, Trace(s, path + (step,), I))
                    elif (c, post) not in seen:
                        seen.add((c, post))
                        nxt.append((s, path + (step,), c))
            level = nxt
        return best


def bad_successor(n: int, g) -> dict:
    """Smallest post-state outside ``g`` for each pre-state that has one."""
    out = {}
    for s in range(n):
        for t in range(n):
            if (s, t) not in g:
                out[s] = t
                break
    return out


def _better(best, cand):
    if best is None or trace_key(cand) < trace_key(best):
        return cand
    return best


sys.setrecursionlimit(max(sys.getrecursionlimit(), 10000))
