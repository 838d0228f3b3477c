"""Acceptance suite: the scenario reproductions and oracle sweeps.

Each test prints one PASS line on success (run with -s to see them all);
an assertion failure marks the criterion failed. Scenario timings assert
the stated budgets; the oracle sweeps assert zero violations.
"""
import time

from minitutor import prelude, typecheck
from minitutor.checker import (
    ConstraintSet, Counterexample, GlobalExample, check_all, check_example,
)
from minitutor.config import Budgets
from minitutor.engine import (
    BudgetExhausted, Classification, FailedHole, blame, give_feedback, recover,
)
from minitutor.exercises import validate_exercise
from minitutor.hmtypes import parse_type
from minitutor.interp import Session, Thunk, eval_entry, ground_to_value
from minitutor.lang import ast
from minitutor.lang.parser import parse
from minitutor.lang.pretty import expr_text
from minitutor.synthesis import (
    Budget, Conflict, Exhausted, NoConflict, Success, SynthesisTask, Timeout,
    detect_conflict, learn_cost_model, synthesize, uniform_cost_model,
)

from conftest import PAPER_PROGRAMS
from oracles import (OutOfGas, RefError, enumerate_fillings,
                     fill_and_ref_run, ref_run, subst_var)

BASE = prelude.global_env()
LIB = prelude.schemes()
SIG = parse_type("[Int] -> [Int]")


def report(n: int, detail: str) -> None:
    print(f"\nACCEPTANCE {n:2d} PASS  {detail}")


def _feedback(my_sort, src, budgets=None):
    t0 = time.monotonic()
    fb = give_feedback(my_sort, src, budgets)
    return fb, time.monotonic() - t0


class TestScenario1FinishedWrong:
    def test_criterion(self, my_sort):
        fb, dt = _feedback(my_sort, PAPER_PROGRAMS["finished_wrong"])
        assert fb.classification == Classification.OFF_TRACK
        cex = fb.counterexample
        assert cex is not None
        assert cex.input == sorted(cex.input, reverse=True) and len(set(cex.input)) > 1, \
            "counterexample input must be strictly descending"
        session = Session()
        assert session.to_ground(cex.actual) == cex.input, "actual == input"
        assert fb.violated_properties == ["sort_nondescending"]
        assert dt < 2.0, f"took {dt:.2f}s"
        report(1, f"foldr (:) [] -> OffTrack, cex {cex.input} == actual, "
                  f"violates exactly sort_nondescending ({dt:.2f}s)")


class TestScenario2BadBaseCase:
    def test_criterion(self, my_sort):
        fb, dt = _feedback(my_sort, PAPER_PROGRAMS["bad_base"])
        assert fb.classification == Classification.OFF_TRACK
        cex = fb.counterexample
        assert cex.input == [] and cex.actual_text == "[0]"
        session = Session()
        assert session.to_ground(cex.actual) == [0]
        assert fb.violated_properties == ["sort_permutes"]
        assert dt < 2.0, f"took {dt:.2f}s"
        report(2, f"foldr ? [0] -> OffTrack, my_sort [] == [0], "
                  f"violates exactly sort_permutes ({dt:.2f}s)")


class TestScenario3HoleCounterexample:
    def test_criterion(self, my_sort):
        src = PAPER_PROGRAMS["hole_cex"]
        fb, dt = _feedback(my_sort, src)
        assert fb.classification == Classification.OFF_TRACK
        cex = fb.counterexample
        assert cex is not None and cex.contains_hole
        # v:? with v the larger head of an unsorted 2-element input
        assert len(cex.input) == 2 and cex.input[0] > cex.input[1]
        assert cex.actual_text == f"{cex.input[0]}:?"
        assert dt < 5.0, f"took {dt:.2f}s"

        # brute force: no filling up to depth 3 reconciles the example
        program = parse(src)
        (site,) = ast.holes(program)
        pool = enumerate_fillings(list(site.scope), list(my_sort.library),
                                  depth=3, cap=20_000)
        expected = sorted(cex.input)
        satisfying = []
        for term in pool:
            try:
                if fill_and_ref_run(program, {site.hole_id: term}, cex.input,
                                    gas=6_000) == expected:
                    satisfying.append(term)
            except (RefError, OutOfGas, RecursionError):
                continue
        assert not satisfying, [expr_text(t) for t in satisfying[:3]]
        report(3, f"x:? -> OffTrack with {cex.actual_text}; "
                  f"{len(pool)} fillings (depth<=3) all fail ({dt:.2f}s)")


class TestScenario4MapConflict:
    def test_criterion(self, my_sort):
        fb, dt = _feedback(my_sort, PAPER_PROGRAMS["map_conflict"])
        assert fb.classification == Classification.OFF_TRACK
        assert fb.conflict is not None
        assert fb.conflict.contains_pair((2,), 2, 1), \
            "conflict must contain f 2 == 2 vs f 2 == 1"
        source_inputs = {tuple(e.source_input) for g in fb.conflict.groups
                        for e in g.examples}
        assert (2, 2, 1) in source_inputs
        assert fb.diagnostics.get("candidates") == 0, "synthesis must be skipped"
        assert dt < 2.0, f"took {dt:.2f}s"
        report(4, f"map ? -> OffTrack conflict f 2 == 2 / f 2 == 1 from [2,2,1], "
                  f"0 candidates dequeued ({dt:.2f}s)")


class TestScenario5ZipDefeatsConflictCheck:
    def test_criterion(self, my_sort):
        t0 = time.monotonic()
        tp = typecheck.infer(parse(PAPER_PROGRAMS["map_zip"]), LIB, SIG)
        k = check_all(tp, my_sort.examples, BASE)
        assert isinstance(k, ConstraintSet)
        assert isinstance(detect_conflict(k), NoConflict)

        budget = Budget(time_ms=5000)
        task = SynthesisTask(tp, k, my_sort.library, "my_sort", SIG,
                             my_sort.models[0], my_sort.examples,
                             my_sort.examples[:40], my_sort.properties, BASE, budget)
        outcome = synthesize(task, learn_cost_model(my_sort.models, my_sort.library))
        assert isinstance(outcome, (Exhausted, Timeout))

        result = recover(my_sort, tp.program, FailedHole(0),
                         Budgets(synth_time_ms=1000, recovery_time_ms=3000))
        steps = result.steps
        assert steps and steps[0].blamed_text == "map ?0"
        first_state = steps[0].program_text.strip()
        assert first_state.endswith(". zip [0..]") and first_state.startswith("my_sort = ?")
        dt = time.monotonic() - t0
        assert dt < 5.0 + 5.0, f"took {dt:.2f}s"
        report(5, f"map ? . zip [0..] -> NoConflict, synthesis {type(outcome).__name__}, "
                  f"first repair state {first_state.split('= ')[1]!r} ({dt:.2f}s)")


class TestScenario6FoldrOnTrack:
    def test_criterion(self, my_sort):
        fb, dt = _feedback(my_sort, PAPER_PROGRAMS["foldr_holes"])
        assert fb.classification == Classification.ON_TRACK
        filling = fb.retained_filling
        assert filling is not None and set(filling) == {0, 1}
        assert expr_text(filling[0]) == "insert"
        for x in range(4):
            session = Session(10_000)
            env = BASE.child({"x": Thunk.from_value(ground_to_value(x)),
                              "xs": Thunk.from_value(ground_to_value([1]))})
            v = session.eval(filling[1], env, None)
            assert session.to_ground(session.deep_force(v)) == [x], \
                "hole 1 must evaluate to [x]"
        assert dt < 10.0, f"took {dt:.2f}s"
        report(6, f"foldr ? ? xs -> OnTrack, filling {{insert, [x]}} verified ({dt:.2f}s)")


class TestScenario7WhereF:
    def test_criterion(self, my_sort):
        fb, dt = _feedback(my_sort, PAPER_PROGRAMS["where_f"])
        assert fb.classification == Classification.ON_TRACK
        filling = fb.retained_filling
        assert filling is not None and set(filling) == {0}
        # observationally insert y ys on generated local inputs
        for y in range(4):
            for ys in ([], [0], [2], [1, 3], [0, 1, 2]):
                session = Session(20_000)
                env = BASE.child({
                    "y": Thunk.from_value(ground_to_value(y)),
                    "ys": Thunk.from_value(ground_to_value(ys)),
                    "x": Thunk.from_value(ground_to_value(y)),
                    "xs": Thunk.from_value(ground_to_value([])),
                    "_a0": Thunk.from_value(ground_to_value([y])),
                })
                v = session.eval(filling[0], env, None)
                assert session.to_ground(session.deep_force(v)) == sorted(ys + [y])
        (spec,) = fb.hole_specs
        assert spec.examples
        for ex in spec.examples:
            env = dict(ex.env)
            assert sorted(env["ys"] + [env["y"]]) == ex.expected, \
                "hole spec example not satisfied by insert"
        assert dt < 10.0, f"took {dt:.2f}s"
        report(7, f"f y ys = ? -> OnTrack, filling == insert y ys observationally, "
                  f"{len(spec.examples)} faithful spec examples ({dt:.2f}s)")


class TestCriterion8GuidanceEffect:
    def test_criterion(self, my_sort):
        tp = typecheck.infer(parse(PAPER_PROGRAMS["foldr_holes"]), LIB, SIG)
        k = check_all(tp, my_sort.examples, BASE)
        task = SynthesisTask(tp, k, my_sort.library, "my_sort", SIG,
                             my_sort.models[0], my_sort.examples,
                             my_sort.examples[:40], my_sort.properties, BASE, Budget())
        learned = synthesize(task, learn_cost_model(my_sort.models, my_sort.library))
        uniform = synthesize(task, uniform_cost_model())
        assert isinstance(learned, Success) and isinstance(uniform, Success)
        assert learned.candidates <= uniform.candidates
        report(8, f"guidance: learned {learned.candidates} <= uniform "
                  f"{uniform.candidates} candidates, both succeed")


CORPUS = [
    "my_sort = foldr ? []",
    "my_sort = foldr ? [0]",
    "my_sort = map ?",
    "my_sort = map ? . zip [0..]",
    "my_sort [] = []\nmy_sort (x:xs) = x : ?",
    "my_sort [] = []\nmy_sort (x:xs) = ? : my_sort xs",
    "my_sort [] = ?\nmy_sort (x:xs) = insert x (my_sort xs)",
    "my_sort [] = []\nmy_sort (x:xs) = insert ? (my_sort xs)",
    "my_sort [] = []\nmy_sort (x:xs) = insert x ?",
    "my_sort xs = take ? xs",
    "my_sort xs = drop ? xs",
    "my_sort xs = filter ? xs",
    "my_sort xs = reverse ?",
    "my_sort xs = ? xs",
    "my_sort xs = foldr insert ? xs",
    "my_sort xs = foldr ? [] xs",
    "my_sort = ?",
    "my_sort [] = []\nmy_sort (x:xs) = f x (my_sort xs)\n  where f y ys = ?",
    "my_sort xs = map (\\p -> ?) (zip [0..] xs)",
    "my_sort xs = ? : []",
    "my_sort xs = [?]",
    "my_sort xs = [? + 1]",
    "my_sort xs = insert ? xs",
    "my_sort xs = take (length xs) ?",
    "my_sort (x:xs) = [?]\nmy_sort [] = []",
    "my_sort [] = []\nmy_sort (x:xs) = foldr ? ? xs",
    "my_sort = foldr ? ?",
    "my_sort xs = ? (? xs)",
    "my_sort [] = ?\nmy_sort (x:xs) = ?",
    "my_sort xs = map ? (filter ? xs)",
    "my_sort xs = take ? (drop ? xs)",
    "my_sort xs = case xs of\n  [] -> ?\n  (y:ys) -> my_sort ys",
    "my_sort xs = [head ?]",
    "my_sort xs = reverse (map ? xs)",
    "my_sort xs = tail ?",
]


class TestCriterion9Oracles:
    def test_a_uneval_and_counterexample_soundness(self, my_sort):
        probe_inputs = [[], [1], [2, 1], [0, 2, 1]]
        programs = 0
        cex_checked = 0
        constraint_checked = 0
        for src in CORPUS:
            program = parse(src)
            typecheck.infer(program, LIB, SIG)  # corpus must be well-typed
            programs += 1
            sites = ast.holes(program)
            pools = {
                s.hole_id: enumerate_fillings(
                    list(s.scope), list(my_sort.library), depth=2, cap=4000)
                for s in sites
            }
            for inp in probe_inputs:
                expected = sorted(inp)
                outcome = check_example(program, GlobalExample(inp, expected), BASE)
                if isinstance(outcome, Counterexample):
                    cex_checked += 1
                    self._assert_no_filling_works(program, sites, pools, inp, expected)
                elif isinstance(outcome, ConstraintSet) and len(sites) == 1:
                    site = sites[0]
                    locals_ = outcome.locals.get(site.hole_id, [])
                    if outcome.opaque_holes or not locals_ \
                            or not all(l.env_complete for l in locals_):
                        continue
                    constraint_checked += 1
                    self._assert_satisfying_fillings_pass(
                        program, site, pools[site.hole_id], locals_, inp, expected)
        assert programs >= 30
        assert cex_checked >= 10 and constraint_checked >= 5
        report(9, f"(a) {programs} programs: {cex_checked} counterexamples and "
                  f"{constraint_checked} constraint sets certified against brute force")

    def _assert_no_filling_works(self, program, sites, pools, inp, expected):
        import itertools
        per_hole = [pools[s.hole_id][: (4000 if len(sites) == 1 else 60)]
                    for s in sites]
        for combo in itertools.product(*per_hole):
            filling = {s.hole_id: t for s, t in zip(sites, combo)}
            try:
                got = fill_and_ref_run(program, filling, inp, gas=4_000)
            except (RefError, OutOfGas, RecursionError):
                continue
            assert got != expected, (
                f"counterexample refuted: {[expr_text(t) for t in combo]} "
                f"on {inp}")

    def _assert_satisfying_fillings_pass(self, program, site, pool, locals_,
                                         inp, expected):
        model = parse(PAPER_PROGRAMS["model"])
        for term in pool[:2500]:
            if not self._satisfies_locals(term, locals_, model):
                continue
            try:
                got = fill_and_ref_run(program, {site.hole_id: term}, inp, gas=6_000)
            except (RefError, OutOfGas, RecursionError):
                continue  # satisfaction was vacuous for this term
            assert got == expected, (
                f"constraints unsound: {expr_text(term)} satisfies locals "
                f"but fails {inp}")

    def _satisfies_locals(self, term, locals_, model) -> bool:
        from minitutor.interp import ground_to_expr
        for lex in locals_:
            expr = term
            for name, value in lex.env:
                expr = subst_var(expr, name, ground_to_expr(value))
            for arg in lex.args:
                expr = ast.App(expr, ground_to_expr(arg))
            wrapper = ast.Program(
                (ast.TopBinding("check", ast.Lam(ast.PWild(), expr)),)
                + model.bindings, "check")
            try:
                if ref_run(wrapper, 0, gas=6_000) != lex.expected:
                    return False
            except (RefError, OutOfGas, RecursionError):
                return False
        return True

    def test_b_live_eval_vs_reference(self):
        programs = [
            PAPER_PROGRAMS["model"],
            PAPER_PROGRAMS["finished_wrong"],
            "f xs = xs",
            "f xs = reverse xs",
            "f xs = map (\\x -> x + 1) xs",
            "f xs = filter (\\x -> x <= 2) xs",
            "f xs = take 2 xs",
            "f xs = drop 2 xs",
            "f xs = take (length xs) [0..]",
            "f xs = zip xs (reverse xs)",
            "f xs = map fst (zip xs [0..])",
            "f xs = foldr (:) [] xs",
            "f xs = foldr (\\a b -> a : b) [] xs",
            "f xs = foldr (\\a b -> insert a b) [] xs",
            "f xs = length xs : map (\\x -> x - 1) xs",
            "f xs = case xs of\n  [] -> [0]\n  (y:ys) -> y : f ys",
            "f [] = []\nf (x:xs) = max x 1 : f xs",
            "f [] = []\nf (x:xs) | x <= 1 = x : f xs\n         | otherwise = f xs",
            "f xs = g xs\n  where g ys = reverse (reverse ys)",
            "f xs = (\\g -> g (g xs)) reverse",
            "f xs = [length xs, length (reverse xs)]",
            "f xs = filter (\\x -> elem x [1, 2]) xs",
            "f xs = [min 1 2, max 1 2]",
            "f xs = insert 2 (insert 0 xs)",
            "f xs = head (reverse (insert 9 xs)) : []",
        ]
        inputs = [[], [0], [1], [3], [1, 2], [2, 1], [0, 0], [3, 1, 2],
                  [2, 2, 1], [0, 3, 1, 2]]
        pairs = 0
        for src in programs:
            program = parse(src)
            for inp in inputs:
                try:
                    want = ref_run(program, inp)
                except (RefError, OutOfGas):
                    continue
                session = Session(200_000)
                got = session.to_ground(eval_entry(session, program, BASE, inp))
                assert got == want, (src, inp, got, want)
                pairs += 1
        assert pairs >= 200
        report(9, f"(b) {pairs} hole-free (program, input) pairs agree with "
                  f"the reference evaluator")

    def test_c_recovery_terminates_within_bound(self, my_sort):
        budgets = Budgets(synth_time_ms=250, recovery_time_ms=1200)
        checked = 0
        for src in CORPUS:
            program = parse(src)
            bound = max(1, ast.node_count(program))
            tp = typecheck.infer(program, LIB, SIG)
            outcome = check_all(tp, my_sort.examples, BASE)
            if isinstance(outcome, Counterexample):
                evidence = outcome
            else:
                sites = ast.holes(program)
                if not sites:
                    continue
                evidence = FailedHole(sites[0].hole_id)
            result = recover(my_sort, program, evidence, budgets)
            assert len(result.steps) <= bound, src
            checked += 1
        assert checked >= 30
        report(9, f"(c) recovery stayed within the node-count bound on "
                  f"{checked} corpus programs")


class TestCriterion10ExerciseHealth:
    def test_criterion(self, my_sort, store):
        import json
        from pathlib import Path

        bundled = json.loads(
            (Path(__file__).parent.parent / "src" / "minitutor" / "data"
             / "my_sort.json").read_text())
        assert not isinstance(validate_exercise(bundled), list)

        mutated = dict(bundled)
        mutated["properties"] = list(bundled["properties"]) + [
            "sort_keeps_length xs = length (my_sort xs) == length xs + 1",
        ]
        result = validate_exercise(mutated)
        assert isinstance(result, list)
        assert any("sort_keeps_length" in e and "input" in e for e in result), result

        disagreeing = dict(bundled)
        disagreeing["solutions"] = list(bundled["solutions"]) + ["my_sort xs = xs"]
        result2 = validate_exercise(disagreeing)
        assert isinstance(result2, list)
        assert any("disagree" in e for e in result2), result2
        report(10, "bundled exercise healthy; mutated property and disagreeing "
                   "model each rejected with a witness")
