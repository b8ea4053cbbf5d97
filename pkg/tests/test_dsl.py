import json

import pytest
from hypothesis import given, settings, strategies as st

from rgkernel.dsl import (
    RunOptions, ScriptError, parse, parse_command, parse_expr, render, run, show_command,
    show_expr, show_script, tokenize,
)
from rgkernel.dsl.ast import (
    ArgName, ArgPred, CAssign, CAtom, CBin, CCas, CEval, CFix, CFrame, CIf, CIter, CName,
    CPred, CWhile, DeclDef, DeclVar, DomValues, EBinary, EBool, EDeref, EName, ENum, ESet,
    EUnary, Goal, Script,
)
from rgkernel.verdict import Outcome

# -- strategies over syntax trees --------------------------------------------------

NAMES = st.sampled_from(["x", "y", "w", "sample"])
OPS = st.sampled_from(["=", "!=", "<", "<=", ">", ">=", "in", "notin", "subset", "subseteq",
                       "+", "-", "union", "inter", "and", "or"])
literals = st.one_of(
    st.integers(-3, 5).map(ENum),
    st.booleans().map(EBool),
    st.lists(st.integers(0, 3), unique=True, max_size=3).map(lambda xs: ESet(tuple(sorted(xs)))),
)


def _names(children):
    plain = st.builds(EName, NAMES, st.booleans())
    indexed = st.builds(EName, NAMES, st.just(False), children)
    return st.one_of(plain, indexed)


exprs = st.recursive(
    st.one_of(literals, st.builds(EName, NAMES, st.booleans())),
    lambda ch: st.one_of(
        _names(ch),
        st.builds(EDeref, st.builds(EName, NAMES)),
        st.builds(EUnary, st.sampled_from(["not", "-"]), ch),
        st.builds(EBinary, OPS, ch, ch),
    ),
    max_leaves=6,
)
targets = st.builds(EName, NAMES)
preds = st.one_of(exprs, st.sampled_from(["r", "zero", "univ", "id"]).map(ArgName))

commands = st.recursive(
    st.one_of(
        st.sampled_from(["bot", "top", "nil", "term", "idle", "fair"]).map(CAtom),
        st.sampled_from(["c1", "spec"]).map(CName),
        st.builds(CPred, st.sampled_from(["test", "pgm", "env", "guar", "rely", "assert",
                                          "post", "atomic", "opt"]), preds),
        st.builds(CEval, exprs, literals),
        st.builds(CAssign, targets, exprs),
        st.builds(CCas, targets, exprs, exprs),
    ),
    lambda ch: st.one_of(
        st.builds(CBin, st.sampled_from([";", "|", "||", "/\\"]), ch, ch),
        st.builds(CIter, st.sampled_from(["fin", "om"]), ch),
        st.builds(CFix, st.sampled_from(["mu", "nu"]), st.sampled_from(["f", "g"]), ch),
        st.builds(CFrame, st.lists(NAMES, min_size=1, max_size=2, unique=True).map(tuple), ch),
        st.builds(CIf, exprs, ch, ch),
        st.builds(CWhile, exprs, ch),
    ),
    max_leaves=6,
)


class TestRoundTrip:
    @given(exprs)
    @settings(max_examples=300, deadline=None)
    def test_expressions(self, e):
        assert parse_expr(show_expr(e)) == e

    @given(commands)
    @settings(max_examples=300, deadline=None)
    def test_commands(self, c):
        assert parse_command(show_command(c)) == c

    @given(st.lists(commands, min_size=1, max_size=3),
           st.lists(st.tuples(st.sampled_from(["refine", "equal", "guarantee", "stable"]),
                              st.none() | st.sampled_from(["a", "no-writes"]),
                              st.none() | st.integers(0, 6),
                              st.none() | st.sampled_from(["enum", "graph"]),
                              st.sampled_from(["holds", "fail"])), max_size=4))
    @settings(max_examples=100, deadline=None)
    def test_scripts(self, cmds, goals):
        decls = [DeclVar("x", DomValues((ENum(0), ENum(1))))]
        decls += [DeclDef("cmd", f"k{i}", c) for i, c in enumerate(cmds)]
        gs = []
        for kind, label, depth, engine, expect in goals:
            if kind in ("refine", "equal"):
                args = (cmds[0], cmds[-1])
            elif kind == "guarantee":
                args = (cmds[0], ArgName("id"))
            else:
                args = (ArgPred(EBinary("=", EName("x"), ENum(0))), ArgName("univ"))
            gs.append(Goal(kind, args, (), label, depth, engine, expect))
        s = Script(tuple(decls), tuple(gs))
        assert parse(show_script(s)) == s

    @pytest.mark.parametrize("path", ["basics", "hoare_loop", "remove"])
    def test_shipped_scripts(self, path):
        from pathlib import Path
        text = (Path(__file__).parent.parent / "scripts" / f"{path}.rg").read_text()
        s = parse(text)
        assert parse(show_script(s)) == s


class TestParsing:
    def test_stable_goal(self):
        s = parse("var x in {0,1}; rel r := x' = x; check stable {x = 0} under r;")
        assert len(s.goals) == 1 and s.goals[0].kind == "stable"

    def test_refine_goal(self):
        s = parse("var x in {0,1}; rel r := x' = x; cmd spec := rely r /\\ post [x' = 0];"
                  " check refine spec >= pgm<x' = 0> depth 3;")
        (g,) = s.goals
        assert g.kind == "refine" and g.depth == 3
        assert g.args[0] == CName("spec")
        assert parse(show_script(s)) == s

    def test_error_position(self):
        text = "var x in {0,1};\ncheck refine >= nil;"
        with pytest.raises(ScriptError) as info:
            parse(text)
        err = info.value
        assert (err.line, err.col) == (2, 14)
        rendered = err.render().splitlines()
        assert rendered[-1].index("^") == rendered[-2].index(">=")

    def test_precedence(self):
        c = parse_command("nil | pgm<true> || env<true> /\\ top ; bot")
        assert c.op == "|"
        assert c.right.op == "||"
        assert c.right.right.op == "/\\"
        assert c.right.right.right.op == ";"

    def test_hyphenated_words(self):
        toks = tokenize("while-rule x-1")
        assert [t.text for t in toks[:-1]] == ["while-rule", "x", "-", "1"]

    def test_bad_character(self):
        with pytest.raises(ScriptError) as info:
            tokenize("var x in {0,1} @")
        assert info.value.col == 16

    @pytest.mark.parametrize("text, fragment", [
        ("var x in {0,1}; check refine y >= nil;", "unknown command"),
        ("var x in {0,1}; var x in {0,1};", "declared twice"),
        ("var x in {0,1}; check stable {x' = 0} under id;", "primed"),
        ("var x in {0,1}; check stable {x + 1} under id;", "not a boolean"),
        ("var x in 2..1;", "empty range"),
        ("var x in {0,1}; check law no-such-law;", "unknown law"),
    ])
    def test_elaboration_errors(self, text, fragment):
        with pytest.raises(ScriptError) as info:
            run(text)
        assert fragment in str(info.value)


BASICS = """
var x in {0,1};
rel r := x' = x;
cmd spec := rely r /\\ post [x' = 0];
check stable {x = 0} under r;
check refine spec >= pgm<x' = 0> depth 3;
check bad: refine test<x = 0> >= test<x = 1> expect fail;
check establish {true} under univ [*x + *x -> 1] {false} expect fail;
check establish {true} under id [*x + *x -> 1] {false};
check law choice-comm samples 10;
"""


class TestRunner:
    def test_verdicts(self):
        res = run(BASICS)
        assert [r.id for r in res] == ["g1", "g2", "bad", "g4", "g5", "g6"]
        assert all(r.expected for r in res)
        assert res[2].verdict.outcome is Outcome.FAILS

    def test_counterexample_in_json(self):
        doc = json.loads(render(run(BASICS), "json", seed=1))
        bad = next(g for g in doc["goals"] if g["id"] == "bad")
        assert bad["verdict"] == "fails"
        assert bad["counterexample"] is not None
        assert doc["seed"] == 1

    def test_json_is_deterministic(self):
        opts = RunOptions(seed=5)
        a = render(run(BASICS, opts), "json", seed=5)
        b = render(run(BASICS, opts), "json", seed=5)
        assert a == b

    def test_parallel_matches_serial(self):
        serial = render(run(BASICS, RunOptions(seed=3)), "json", seed=3)
        par = render(run(BASICS, RunOptions(seed=3, jobs=2)), "json", seed=3)
        assert serial == par

    def test_engine_override(self):
        res = run(BASICS, RunOptions(engine="enum"))
        assert {r.verdict.engine.value for r in res} == {"enum"}

    def test_case_study_goals(self):
        text = ("var x in {0,1};\ncheck hoare-loop with rely = univ expect fail;\n"
                "check hoare-loop with rely = id;\n")
        assert all(r.expected for r in run(text))

    def test_theorem_sweep_goal(self):
        text = "var x in {0,1};\ncheck t: law intro-while samples 8 depth 3;\n"
        s = parse(text)
        assert parse(show_script(s)) == s
        (res,) = run(s)
        assert res.id == "t" and res.verdict.holds and res.verdict.depth == 3

    def test_human_report(self):
        out = render(run(BASICS), "human", seed=0)
        assert out.count("[ok ]") == 6
