"""Exercise model, property attribution, blame, recovery, feedback."""
import pytest

from minitutor import prelude, typecheck
from minitutor.checker import ConstraintSet, Counterexample, check_all
from minitutor.config import Budgets
from minitutor.engine import (
    BudgetExhausted, Classification, ExerciseAuthoringError, FailedHole,
    GeneratorParams, RepairSuggestion, blame, check_properties,
    generate_examples, give_feedback, hole_specs, recover,
)
from minitutor.hmtypes import parse_type
from minitutor.interp import Session
from minitutor.lang import ast
from minitutor.lang.parser import parse
from minitutor.lang.pretty import expr_text

from conftest import PAPER_PROGRAMS
from oracles import fill_and_ref_run

BASE = prelude.global_env()
LIB = prelude.schemes()
SIG = parse_type("[Int] -> [Int]")
MODEL = parse(PAPER_PROGRAMS["model"])


class TestGenerateExamples:
    def test_basic_outputs(self, my_sort):
        by_input = {tuple(e.input): e.expected for e in my_sort.examples}
        assert by_input[()] == []
        assert by_input[(3, 2, 1)] == [1, 2, 3]
        assert by_input[(2, 2, 1)] == [1, 2, 2]  # the conflict scenario needs this

    def test_deduplicated_and_sorted(self, my_sort):
        inputs = [tuple(e.input) for e in my_sort.examples]
        assert len(inputs) == len(set(inputs))
        sizes = [e.size for e in my_sort.examples]
        assert sizes == sorted(sizes)

    def test_full_enumeration_present(self, my_sort):
        inputs = {tuple(e.input) for e in my_sort.examples}
        import itertools
        for n in range(5):
            for combo in itertools.product(range(4), repeat=n):
                assert combo in inputs

    def test_seed_determinism(self):
        a = generate_examples([MODEL], BASE, GeneratorParams())
        b = generate_examples([MODEL], BASE, GeneratorParams())
        assert [(e.input, e.expected) for e in a] == [(e.input, e.expected) for e in b]

    def test_disagreeing_models_rejected(self):
        wrong = parse("my_sort xs = xs")
        with pytest.raises(ExerciseAuthoringError) as exc:
            generate_examples([MODEL, wrong], BASE, GeneratorParams(max_len=2))
        assert "disagree" in str(exc.value)


class TestCheckProperties:
    def _cex(self, inp, actual):
        from minitutor.interp import ground_to_value
        session = Session()
        v = session.deep_force(ground_to_value(actual))
        return Counterexample(inp, None, v, str(actual), False, None)

    def test_unsorted_output_violates_nondescending(self, my_sort):
        violated, skipped = check_properties(my_sort, self._cex([3, 2, 1], [3, 2, 1]))
        assert violated == ["sort_nondescending"]
        assert not skipped

    def test_invented_element_violates_permutes(self, my_sort):
        violated, _ = check_properties(my_sort, self._cex([], [0]))
        assert violated == ["sort_permutes"]

    def test_correct_pair_violates_nothing(self, my_sort):
        violated, _ = check_properties(my_sort, self._cex([2, 1], [1, 2]))
        assert violated == []

    def test_hole_counterexample_skipped(self, my_sort):
        cex = Counterexample([2, 1], [1, 2], None, "2:?", True, None)
        violated, skipped = check_properties(my_sort, cex)
        assert violated == [] and skipped


class TestBlame:
    def test_cons_leaf(self, my_sort):
        tp = typecheck.infer(parse(PAPER_PROGRAMS["finished_wrong"]), LIB, SIG)
        cex = check_all(tp, my_sort.examples, BASE)
        path = blame(tp.program, cex)
        assert expr_text(ast.node_at(tp.program, path)) == "(:)"

    def test_failed_hole_blames_parent(self):
        p = parse(PAPER_PROGRAMS["map_zip"])
        path = blame(p, FailedHole(0))
        assert expr_text(ast.node_at(p, path)) == "map ?0"

    def test_whole_body_fallback(self, my_sort):
        tp = typecheck.infer(parse("my_sort xs = [0, 0, 0, 0, 0]"), LIB, SIG)
        cex = check_all(tp, my_sort.examples, BASE)
        path = blame(tp.program, cex)
        node = ast.node_at(tp.program, path)
        assert node is not None  # falls somewhere inside the literal body


class TestRecover:
    def test_cons_fold_repaired(self, my_sort):
        program = parse(PAPER_PROGRAMS["finished_wrong"])
        tp = typecheck.infer(program, LIB, SIG)
        cex = check_all(tp, my_sort.examples, BASE)
        result = recover(my_sort, program, cex, Budgets())
        assert isinstance(result, RepairSuggestion)
        assert result.replaced_texts == ["(:)"]
        assert "foldr insert []" in result.program_text
        # the repair really is a correct program
        assert fill_and_ref_run(result.program, {}, [3, 1, 2]) == [1, 2, 3]

    def test_zip_first_repair_state(self, my_sort):
        program = parse(PAPER_PROGRAMS["map_zip"])
        budgets = Budgets(synth_time_ms=800, recovery_time_ms=1500)
        result = recover(my_sort, program, FailedHole(0), budgets)
        steps = result.steps if isinstance(result, BudgetExhausted) else result.steps
        assert steps, "recovery must take at least one step"
        first = steps[0]
        assert first.blamed_text == "map ?0"
        assert first.program_text.strip().startswith("my_sort = ?")
        assert ". zip [0..]" in first.program_text

    def test_iteration_bound(self, my_sort):
        program = parse(PAPER_PROGRAMS["map_zip"])
        bound = ast.node_count(program)
        budgets = Budgets(synth_time_ms=300, recovery_time_ms=2000)
        result = recover(my_sort, program, FailedHole(0), budgets)
        steps = result.steps
        assert len(steps) <= bound

    def test_zip_recovery_completes(self, my_sort):
        # worst case: everything gets replaced and synthesis rebuilds a
        # model-shaped solution from a bare hole
        program = parse(PAPER_PROGRAMS["map_zip"])
        result = recover(my_sort, program, FailedHole(0), Budgets())
        assert isinstance(result, RepairSuggestion)
        assert [s.blamed_text for s in result.steps] == ["map ?0", "?1 . zip [0..]"]
        assert fill_and_ref_run(result.program, {}, [3, 1, 2]) == [1, 2, 3]

    def test_whole_body_hole_recoverable(self, my_sort):
        from minitutor.engine import _synth_task
        from minitutor.synthesis import Success, learn_cost_model, synthesize

        program = parse("my_sort = ?")
        tp = typecheck.infer(program, LIB, SIG)
        k = check_all(tp, my_sort.examples, BASE)
        assert isinstance(k, ConstraintSet)
        cm = learn_cost_model(my_sort.models, my_sort.library)
        out = synthesize(_synth_task(my_sort, tp, k, Budgets()), cm)
        assert isinstance(out, Success)
        assert fill_and_ref_run(program, out.filling, [2, 0, 1]) == [0, 1, 2]


class TestHoleSpecs:
    def test_faithful_and_satisfiable_by_insert(self, my_sort):
        fb = give_feedback(my_sort, PAPER_PROGRAMS["where_f"])
        assert fb.classification == Classification.ON_TRACK
        (spec,) = fb.hole_specs
        assert spec.examples, "hole spec should carry examples"
        for ex in spec.examples:
            env = dict(ex.env)
            # every shown example is satisfied by insert itself
            y, ys = env["y"], env["ys"]
            assert sorted(ys + [y]) == ex.expected

    def test_foldr_scenario_has_two_specs(self, my_sort):
        fb = give_feedback(my_sort, PAPER_PROGRAMS["foldr_holes"])
        assert fb.classification == Classification.ON_TRACK
        assert len(fb.hole_specs) == 2
        spec1 = next(s for s in fb.hole_specs if s.hole_id == 1)
        for ex in spec1.examples:
            env = dict(ex.env)
            assert ex.expected == [env["x"]]  # hole 1 behaves like [x]


class TestDrillAndRefill:
    def test_drilled_model_is_never_off_track(self, my_sort):
        # replacing any small subtree of a correct solution with a hole
        # leaves a completable program; claiming OffTrack would be unsound
        from minitutor.lang.pretty import pretty

        model = my_sort.models[0]
        budgets = Budgets(synth_time_ms=1200, recovery_time_ms=1200)
        drilled = 0
        for path, node in list(ast.iter_paths(model)):
            if isinstance(node, ast.Hole) or ast.expr_size(node) > 2:
                continue
            program = ast.replace_at(model, path, ast.Hole(0))
            fb = give_feedback(my_sort, pretty(program), budgets)
            assert fb.classification != Classification.OFF_TRACK, \
                (path, pretty(program))
            drilled += 1
        assert drilled >= 15


class TestGiveFeedback:
    def test_correct(self, my_sort):
        fb = give_feedback(my_sort, PAPER_PROGRAMS["model"])
        assert fb.classification == Classification.CORRECT

    def test_on_track_with_specs(self, my_sort):
        fb = give_feedback(my_sort, PAPER_PROGRAMS["foldr_holes"])
        assert fb.classification == Classification.ON_TRACK
        assert len(fb.hole_specs) == 2
        assert fb.retained_filling is not None

    def test_map_conflict_skips_synthesis(self, my_sort):
        fb = give_feedback(my_sort, PAPER_PROGRAMS["map_conflict"])
        assert fb.classification == Classification.OFF_TRACK
        assert fb.conflict is not None
        assert fb.diagnostics.get("candidates") == 0
        assert fb.conflict.contains_pair((2,), 2, 1)

    def test_syntax_error(self, my_sort):
        fb = give_feedback(my_sort, "my_sort = foldr (:) [")
        assert fb.classification == Classification.OFF_TRACK
        assert fb.error.kind == "SyntaxError"
        assert fb.error.line == 1

    def test_type_error(self, my_sort):
        fb = give_feedback(my_sort, "my_sort = 1")
        assert fb.classification == Classification.OFF_TRACK
        assert fb.error.kind == "TypeError"

    def test_unbound_name(self, my_sort):
        fb = give_feedback(my_sort, "my_sort = quicksort")
        assert fb.classification == Classification.OFF_TRACK
        assert fb.error.kind == "UnboundVariable"

    def test_disallowed_name_is_unbound(self, my_sort):
        # permutes exists in the implementation library but not on the allow-list
        fb = give_feedback(my_sort, "my_sort xs = my_sort xs\n  where unused = permutes")
        assert fb.classification == Classification.OFF_TRACK
        assert fb.error is not None and fb.error.kind == "UnboundVariable"

    def test_missing_entry(self, my_sort):
        fb = give_feedback(my_sort, "sort2 xs = xs")
        assert fb.classification == Classification.OFF_TRACK
        assert fb.error is not None

    def test_inconclusive_on_divergence(self, my_sort):
        fb = give_feedback(my_sort, "my_sort xs = my_sort xs")
        assert fb.classification == Classification.INCONCLUSIVE

    def test_off_track_counterexample_and_repair(self, my_sort):
        fb = give_feedback(my_sort, PAPER_PROGRAMS["finished_wrong"])
        assert fb.classification == Classification.OFF_TRACK
        assert fb.counterexample is not None
        assert fb.violated_properties == ["sort_nondescending"]
        assert fb.repair is not None

    def test_reentrant(self, my_sort):
        a = give_feedback(my_sort, PAPER_PROGRAMS["map_conflict"])
        b = give_feedback(my_sort, PAPER_PROGRAMS["map_conflict"])
        assert a.classification == b.classification
        assert a.diagnostics.get("candidates") == b.diagnostics.get("candidates")

    def test_too_complex_on_timeout_with_advice(self, my_sort):
        budgets = Budgets(synth_time_ms=900, recovery_time_ms=900)
        fb = give_feedback(my_sort, PAPER_PROGRAMS["map_zip"], budgets)
        assert fb.classification == Classification.TOO_COMPLEX
        assert fb.advice == "foldr"  # the model solution's head construct

    def test_second_exercise_local_recursion(self, store):
        # operators are part of the allowed vocabulary, so the natural
        # accumulator step is found rather than some degenerate filling
        ex = store.get("my_reverse")
        src = ("my_reverse xs = go [] xs\n"
               "  where\n"
               "    go acc [] = acc\n"
               "    go acc (y:ys) = go ? ys")
        fb = give_feedback(ex, src)
        assert fb.classification == Classification.ON_TRACK
        assert expr_text(fb.retained_filling[0]) == "y : acc"

    def test_second_exercise_classifications(self, store):
        ex = store.get("my_reverse")
        assert give_feedback(ex, "my_reverse = reverse").classification \
            == Classification.CORRECT
        fb = give_feedback(ex, "my_reverse xs = xs")
        assert fb.classification == Classification.OFF_TRACK
        assert fb.counterexample is not None

    def test_extra_top_level_helpers_allowed(self, my_sort):
        src = ("twice xs = reverse (reverse xs)\n"
               "my_sort xs = twice (foldr insert [] xs)")
        fb = give_feedback(my_sort, src)
        assert fb.classification == Classification.CORRECT

    def test_correct_program_with_guards(self, my_sort):
        src = ("my_sort [] = []\n"
               "my_sort (x:xs) = ins x (my_sort xs)\n"
               "  where\n"
               "    ins y [] = [y]\n"
               "    ins y (z:zs) | y <= z = y : z : zs\n"
               "                 | otherwise = z : ins y zs")
        fb = give_feedback(my_sort, src)
        assert fb.classification == Classification.CORRECT
