"""Inference, unification and hole typing."""
import pytest
from hypothesis import given, settings, strategies as st

from minitutor import hmtypes, prelude, typecheck
from minitutor.hmtypes import (
    BOOL, INT, Mismatch, OccursCheck, Scheme, TFun, TList, TTuple, TVar,
    apply_subst, fresh_tvar, parse_type, show, unify,
)
from minitutor.lang.parser import parse

from conftest import PAPER_PROGRAMS

LIB = prelude.schemes()
SIG = parse_type("[Int] -> [Int]")


def infer(src, signature=SIG, lib=LIB):
    return typecheck.infer(parse(src), lib, signature)


class TestUnify:
    def test_var_with_int(self):
        a = fresh_tvar()
        assert apply_subst(unify(a, INT), a) == INT

    def test_list_var(self):
        a = fresh_tvar()
        s = unify(TList(a), TList(INT))
        assert apply_subst(s, a) == INT

    def test_occurs_check(self):
        a = fresh_tvar()
        with pytest.raises(OccursCheck):
            unify(a, TList(a))

    def test_mismatch(self):
        with pytest.raises(Mismatch):
            unify(INT, BOOL)

    def test_mgu_function(self):
        a, b = fresh_tvar(), fresh_tvar()
        s = unify(TFun(a, b), TFun(INT, TList(INT)))
        assert apply_subst(s, a) == INT
        assert apply_subst(s, b) == TList(INT)


_types = st.deferred(lambda: st.one_of(
    st.just(INT), st.just(BOOL),
    st.integers(min_value=0, max_value=3).map(TVar),
    st.tuples(_types, _types).map(lambda t: TFun(*t)),
    _types.map(TList),
))


@settings(max_examples=200, deadline=None)
@given(t1=_types, t2=_types)
def test_substitution_idempotent(t1, t2):
    try:
        s = unify(t1, t2)
    except (Mismatch, OccursCheck):
        return
    for t in (t1, t2):
        once = apply_subst(s, t)
        assert apply_subst(s, once) == once
    assert apply_subst(s, t1) == apply_subst(s, t2)


class TestTypeParsing:
    @pytest.mark.parametrize("text", [
        "[Int] -> [Int]",
        "(a -> b -> b) -> b -> [a] -> b",
        "(Int, Bool)",
        "[(Int, Int)]",
        "a -> a",
    ])
    def test_round_trip(self, text):
        scheme = parse_type(text)
        assert show(parse_type(show(scheme.instantiate())).instantiate()) == \
            show(scheme.instantiate())

    def test_error(self):
        with pytest.raises(hmtypes.TypeErr):
            parse_type("[Int")


class TestInference:
    def test_foldr_hole_type(self):
        # hand unification: foldr :: (a -> b -> b) -> b -> [a] -> b applied
        # to the hole and []; result checked against [Int] -> [Int] forces
        # a = Int and b = [Int], so the hole is Int -> [Int] -> [Int]
        tp = infer("my_sort = foldr ? []")
        assert show(tp.holes[0].type) == "Int -> [Int] -> [Int]"

    def test_finished_solution_well_typed(self):
        tp = infer(PAPER_PROGRAMS["finished_wrong"])
        assert tp.holes == {}
        assert show(tp.entry_type) == "[Int] -> [Int]"

    def test_model_well_typed(self):
        infer(PAPER_PROGRAMS["model"])

    def test_wrong_shape_rejected(self):
        with pytest.raises(typecheck.TypeError_) as exc:
            infer("my_sort = 1")
        assert exc.value.path == (0,)

    def test_unbound_variable(self):
        with pytest.raises(typecheck.UnboundVariable) as exc:
            infer("my_sort = quicksort")
        assert exc.value.name == "quicksort"

    def test_hole_local_envs(self):
        tp = infer(PAPER_PROGRAMS["where_f"])
        info = tp.holes[0]
        assert show(info.type) == "[Int]"
        assert show(info.local_env["y"].type) == "Int"
        assert show(info.local_env["ys"].type) == "[Int]"
        assert set(info.decreasing) == {"x", "xs"}
        assert "f" in info.enclosing_defs and "my_sort" in info.enclosing_defs

    def test_foldr_holes_types(self):
        tp = infer(PAPER_PROGRAMS["foldr_holes"])
        assert show(tp.holes[0].type) == "Int -> [Int] -> [Int]"
        assert show(tp.holes[1].type) == "[Int]"

    def test_map_zip_hole_type(self):
        tp = infer(PAPER_PROGRAMS["map_zip"])
        assert show(tp.holes[0].type) == "(Int, Int) -> Int"

    def test_unresolved_hole_defaults_to_int(self):
        # the hole's own type never touches the signature
        tp = infer("my_sort xs = (\\y -> xs) ?")
        assert show(tp.holes[0].type) == "Int"

    def test_renaming_invariance(self):
        a = infer(PAPER_PROGRAMS["foldr_holes"])
        b = infer("my_sort [] = []\nmy_sort (q:qs) = foldr ? ? qs")
        assert show(a.holes[0].type) == show(b.holes[0].type)
        assert show(a.holes[1].type) == show(b.holes[1].type)

    def test_node_types_recorded(self):
        tp = infer(PAPER_PROGRAMS["finished_wrong"])
        assert show(tp.node_types[(0,)]) == "[Int] -> [Int]"

    def test_property_types(self):
        lib2 = dict(LIB)
        lib2["my_sort"] = SIG
        tp = typecheck.infer(parse("sort_permutes xs = my_sort xs `permutes` xs"),
                             lib2, None)
        assert show(tp.entry_type) == "[Int] -> Bool"
