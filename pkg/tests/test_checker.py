"""Live bidirectional example checking."""
from minitutor import prelude, typecheck
from minitutor.checker import (
    ConstraintSet, Counterexample, GlobalExample, Inconclusive,
    check_all, check_example, local_example_text, uneval, value_text,
)
from minitutor.hmtypes import parse_type
from minitutor.interp import Session, eval_entry
from minitutor.lang import ast
from minitutor.lang.parser import parse
from minitutor.lang.pretty import expr_text

from conftest import PAPER_PROGRAMS

BASE = prelude.global_env()
LIB = prelude.schemes()
SIG = parse_type("[Int] -> [Int]")


def typed(src):
    return typecheck.infer(parse(src), LIB, SIG)


def run_uneval(src, inp, expected):
    session = Session()
    tp = typed(src)
    result = eval_entry(session, tp.program, BASE, inp)
    return uneval(session, result, expected, inp)


class TestUneval:
    def test_cons_with_hole_tail_infeasible(self):
        out = run_uneval(PAPER_PROGRAMS["hole_cex"], [2, 1], [1, 2])
        assert isinstance(out, Counterexample)
        assert out.actual_text == "2:?"
        assert out.contains_hole

    def test_equal_values_empty_set(self):
        out = run_uneval(PAPER_PROGRAMS["finished_wrong"], [1, 2, 3], [1, 2, 3])
        assert isinstance(out, ConstraintSet)
        assert out.empty

    def test_map_hole_local_examples(self):
        out = run_uneval("my_sort = map ?0", [2, 2, 1], [1, 2, 2])
        assert isinstance(out, ConstraintSet)
        texts = [local_example_text(e) for e in out.locals[0]]
        assert sorted(texts) == ["f 1 == 2", "f 2 == 1", "f 2 == 2"]


class TestCheckExample:
    def test_finished_wrong_counterexample(self):
        tp = typed(PAPER_PROGRAMS["finished_wrong"])
        out = check_example(tp, GlobalExample([3, 2, 1], [1, 2, 3]), BASE)
        assert isinstance(out, Counterexample)
        assert out.input == [3, 2, 1]
        assert out.actual_text == "[3, 2, 1]"
        blamed = ast.node_at(tp.program, out.blame_origin)
        assert expr_text(blamed) == "(:)"

    def test_bad_base_counterexample(self):
        tp = typed(PAPER_PROGRAMS["bad_base"])
        out = check_example(tp, GlobalExample([], []), BASE)
        assert isinstance(out, Counterexample)
        assert out.actual_text == "[0]"
        assert expr_text(ast.node_at(tp.program, out.blame_origin)) == "[0]"

    def test_constraints_for_two_holes(self):
        tp = typed(PAPER_PROGRAMS["foldr_holes"])
        out = check_example(tp, GlobalExample([1], [1]), BASE)
        assert isinstance(out, ConstraintSet)
        assert out.locals[1][0].expected == [1]

    def test_fuel_exhaustion_is_inconclusive(self):
        tp = typed("my_sort xs = my_sort xs")
        out = check_example(tp, GlobalExample([1], [1]), BASE, fuel=300)
        assert isinstance(out, Inconclusive)

    def test_runtime_error_is_counterexample_with_error(self):
        tp = typed("my_sort xs = head []")
        out = check_example(tp, GlobalExample([1], [1]), BASE)
        assert isinstance(out, Counterexample)
        assert out.error is not None


class TestCheckAll:
    def _examples(self, my_sort):
        return my_sort.examples

    def test_correct_model_empty(self, my_sort):
        tp = typed(PAPER_PROGRAMS["model"])
        out = check_all(tp, my_sort.examples, BASE)
        assert isinstance(out, ConstraintSet)
        assert out.empty

    def test_smallest_counterexample_first(self, my_sort):
        tp = typed(PAPER_PROGRAMS["finished_wrong"])
        out = check_all(tp, my_sort.examples, BASE)
        assert isinstance(out, Counterexample)
        assert out.input == [1, 0]  # the smallest strictly-descending input
        assert out.actual_text == "[1, 0]"

    def test_map_constraints_include_conflict_source(self, my_sort):
        tp = typed(PAPER_PROGRAMS["map_conflict"])
        out = check_all(tp, my_sort.examples, BASE)
        assert isinstance(out, ConstraintSet)
        by_input = [e for e in out.locals[0] if e.source_input == [2, 2, 1]]
        texts = sorted(local_example_text(e) for e in by_input)
        assert texts == ["f 1 == 2", "f 2 == 1", "f 2 == 2"]

    def test_descending_input_always_generated(self, my_sort):
        # a sorted-only generator could never expose the cons-fold bug
        assert any(e.input != sorted(e.input) for e in my_sort.examples)

    def test_merge_concatenates(self, my_sort):
        tp = typed(PAPER_PROGRAMS["foldr_holes"])
        out = check_all(tp, my_sort.examples, BASE)
        assert isinstance(out, ConstraintSet)
        assert len(out.locals[1]) >= 4  # one per singleton input at least
        assert 0 in out.opaque_holes    # nested applications defy local form

    def test_determinism(self, my_sort):
        tp = typed(PAPER_PROGRAMS["map_conflict"])
        a = check_all(tp, my_sort.examples, BASE)
        b = check_all(tp, my_sort.examples, BASE)
        assert [e for e in a.locals[0]] == [e for e in b.locals[0]]
        assert a.opaque_holes == b.opaque_holes
