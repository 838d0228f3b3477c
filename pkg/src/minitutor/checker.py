"""Checking a (partial) program against global input-output examples.

A program is run on an example input; the partial result is then walked
backwards against the expected output. Positions held by a hole under a
plain application chain yield local examples for that hole; a structural
mismatch outside any hole is final, and surfaces as a counterexample no
filling can fix. Anything a hole influences in a way we cannot express
as a local example (it was scrutinized, fed to a primitive, or its
arguments contain further holes) is kept as a residual check: candidate
fillings must still pass the example by evaluation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .interp import (
    Env, FuelExhausted, Ground, HoleInValue, Path, PrimitiveError, Session,
    Thunk, Value, VBool, VCons, VIndet, VInt, VNil, VTuple,
    eval_entry, DEFAULT_FUEL,
)
from .typecheck import TypedProgram


@dataclass(frozen=True)
class GlobalExample:
    input: Ground
    expected: Ground

    @property
    def size(self) -> int:
        return _ground_size(self.input)


def _ground_size(g: Ground) -> int:
    if isinstance(g, (list, tuple)):
        return 1 + sum(_ground_size(x) for x in g)
    return 1


def _freeze_ground(g):
    if isinstance(g, list):
        return ("list",) + tuple(_freeze_ground(x) for x in g)
    if isinstance(g, tuple):
        return tuple(_freeze_ground(x) for x in g)
    return g


@dataclass(frozen=True)
class LocalExample:
    """One observation of a hole: environment, pending arguments, output."""

    hole_id: int
    env: tuple[tuple[str, Ground], ...]  # groundable lexical vars, name-sorted
    args: tuple[Ground, ...]
    expected: Ground
    source_input: Ground
    # False when some lexical binding could not be grounded (a function,
    # or a value still containing holes); such examples never conflict.
    env_complete: bool = True
    # the hole's captured environment, for evaluating candidate fillings
    env_ref: Optional[Env] = field(default=None, compare=False, hash=False)

    def key(self) -> tuple:
        return (_freeze_ground(self.env), _freeze_ground(self.args))


@dataclass
class ConstraintSet:
    locals: dict[int, list[LocalExample]] = field(default_factory=dict)
    # holes whose influence on some example defied local-example form
    opaque_holes: set[int] = field(default_factory=set)
    # examples that constrain holes but yielded no (or incomplete) locals
    residual: list[GlobalExample] = field(default_factory=list)

    @property
    def empty(self) -> bool:
        return not self.locals and not self.opaque_holes and not self.residual

    def add(self, other: "ConstraintSet") -> None:
        for hid, items in other.locals.items():
            self.locals.setdefault(hid, []).extend(items)
        self.opaque_holes |= other.opaque_holes
        self.residual.extend(other.residual)


@dataclass
class Counterexample:
    input: Ground
    expected: Ground
    actual: Optional[Value]        # deep-forced partial result, None on a crash
    actual_text: str
    contains_hole: bool
    blame_origin: Optional[Path]   # program point that built the clashing value
    error: Optional[str] = None    # runtime failure instead of a wrong value
    violated_properties: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class Inconclusive:
    input: Ground
    reason: str = "fuel exhausted"


CheckOutcome = Union[ConstraintSet, Counterexample, Inconclusive]


# --- rendering ---------------------------------------------------------------


def value_text(session: Session, v: Value) -> str:
    """Source-syntax rendering of a (partial) value, e.g. ``2:?``."""
    return _text(session, v, 0)


def _text(s: Session, v: Value, prec: int) -> str:
    if isinstance(v, VInt):
        return str(v.n)
    if isinstance(v, VBool):
        return "True" if v.b else "False"
    if isinstance(v, VIndet):
        return "?"
    if isinstance(v, VTuple):
        return "(" + ", ".join(_text(s, s.force(t), 0) for t in v.items) + ")"
    if isinstance(v, (VNil, VCons)):
        items: list[str] = []
        cur: Value = v
        while isinstance(cur, VCons):
            items.append(_text(s, s.force(cur.head), 0))
            cur = s.force(cur.tail)
        if isinstance(cur, VNil):
            return "[" + ", ".join(items) + "]"
        # improper spine: render as a cons chain ending in the leftover
        chain = ":".join(items + [_text(s, cur, 6)])
        return f"({chain})" if prec > 5 else chain
    return f"<{type(v).__name__[1:].lower()}>"


def value_json(session: Session, v: Value):
    """Structural rendering: ints/bools/lists/tuples, holes as objects."""
    if isinstance(v, VInt):
        return v.n
    if isinstance(v, VBool):
        return v.b
    if isinstance(v, VIndet):
        return {"hole": v.hole_id}
    if isinstance(v, VTuple):
        return {"tuple": [value_json(session, session.force(t)) for t in v.items]}
    if isinstance(v, (VNil, VCons)):
        items = []
        cur: Value = v
        while isinstance(cur, VCons):
            items.append(value_json(session, session.force(cur.head)))
            cur = session.force(cur.tail)
        if isinstance(cur, VNil):
            return items
        return {"cons": items, "tail": value_json(session, cur)}
    return {"opaque": type(v).__name__}


def ground_text(g: Ground) -> str:
    if isinstance(g, bool):
        return "True" if g else "False"
    if isinstance(g, int):
        return str(g)
    if isinstance(g, list):
        return "[" + ", ".join(ground_text(x) for x in g) + "]"
    if isinstance(g, tuple):
        return "(" + ", ".join(ground_text(x) for x in g) + ")"
    raise TypeError(g)


# --- unevaluation ------------------------------------------------------------


class _Walk:
    def __init__(self, session: Session, source_input: Ground):
        self.s = session
        self.source_input = source_input
        self.locals: dict[int, list[LocalExample]] = {}
        self.opaque: set[int] = set()
        self.feasible = True
        self.mismatch_origin: Optional[Path] = None
        self.saw_hole = False

    def walk(self, v: Value, expected: Ground, ancestors: tuple[Value, ...]) -> None:
        if not self.feasible:
            return
        if isinstance(v, VIndet):
            self.saw_hole = True
            self._constrain(v, expected)
            return
        if isinstance(expected, bool):
            if not (isinstance(v, VBool) and v.b == expected):
                self._mismatch(v, ancestors)
            return
        if isinstance(expected, int):
            if not (isinstance(v, VInt) and v.n == expected):
                self._mismatch(v, ancestors)
            return
        if isinstance(expected, list):
            cur: Value = v
            rest = expected
            chain = ancestors
            while True:
                if isinstance(cur, VIndet):
                    self.saw_hole = True
                    self._constrain(cur, list(rest))
                    return
                if isinstance(cur, VNil):
                    if rest:
                        self._mismatch(cur, chain)
                    return
                if isinstance(cur, VCons):
                    if not rest:
                        self._mismatch(cur, chain)
                        return
                    head = self.s.force(cur.head)
                    self.walk(head, rest[0], chain + (cur,))
                    if not self.feasible:
                        return
                    rest = rest[1:]
                    chain = chain + (cur,)
                    cur = self.s.force(cur.tail)
                    continue
                self._mismatch(cur, chain)
                return
        if isinstance(expected, tuple):
            if not (isinstance(v, VTuple) and len(v.items) == len(expected)):
                self._mismatch(v, ancestors)
                return
            for t, g in zip(v.items, expected):
                self.walk(self.s.force(t), g, ancestors + (v,))
                if not self.feasible:
                    return
            return
        raise TypeError(expected)

    def _constrain(self, v: VIndet, expected: Ground) -> None:
        if v.opaque:
            self.opaque.add(v.hole_id)
            return
        try:
            args = tuple(self.s.to_ground(self.s.force(t)) for _, t in v.pending)
        except (HoleInValue, PrimitiveError):
            # an argument the hole was applied to itself depends on a hole
            self.opaque.add(v.hole_id)
            return
        env_items = []
        complete = True
        for name, t in sorted(v.env.local_thunks().items()):
            try:
                env_items.append((name, self.s.to_ground(self.s.force(t))))
            except (HoleInValue, PrimitiveError):
                complete = False
        ex = LocalExample(v.hole_id, tuple(env_items), args, expected,
                          self.source_input, complete, v.env)
        self.locals.setdefault(v.hole_id, []).append(ex)

    def _mismatch(self, v: Value, ancestors: tuple[Value, ...]) -> None:
        self.feasible = False
        for node in (v,) + tuple(reversed(ancestors)):
            if node.origin is not None:
                self.mismatch_origin = node.origin
                return


def uneval(session: Session, result: Value, expected: Ground,
           source_input: Ground) -> Union[ConstraintSet, Counterexample]:
    """Check a partial result against an expected output.

    Returns the local examples forced on each hole, or a counterexample
    when no filling can reconcile the two.
    """
    w = _Walk(session, source_input)
    w.walk(result, expected, ())
    if w.feasible:
        k = ConstraintSet(locals=w.locals, opaque_holes=w.opaque)
        if w.opaque:
            k.residual.append(GlobalExample(source_input, expected))
        return k
    forced = session.deep_force(result)
    return Counterexample(
        input=source_input,
        expected=expected,
        actual=forced,
        actual_text=value_text(session, forced),
        contains_hole=_value_has_hole(session, forced),
        blame_origin=w.mismatch_origin,
    )


def _value_has_hole(s: Session, v: Value) -> bool:
    if isinstance(v, VIndet):
        return True
    if isinstance(v, VCons):
        return (_value_has_hole(s, s.force(v.head))
                or _value_has_hole(s, s.force(v.tail)))
    if isinstance(v, VTuple):
        return any(_value_has_hole(s, s.force(t)) for t in v.items)
    return False


# --- example checking ---------------------------------------------------------


def check_example(tp, ex: GlobalExample, base: Env,
                  fuel: int = DEFAULT_FUEL,
                  extra: Optional[dict[str, Thunk]] = None) -> CheckOutcome:
    """Run one example through live evaluation, then unevaluation.

    ``tp`` may be a TypedProgram or a bare Program; only the syntax is
    needed for checking.
    """
    program = tp.program if isinstance(tp, TypedProgram) else tp
    session = Session(fuel)
    try:
        result = eval_entry(session, program, base, ex.input, extra)
        outcome = uneval(session, result, ex.expected, ex.input)
    except (FuelExhausted, RecursionError):
        return Inconclusive(ex.input)
    except PrimitiveError as e:
        return Counterexample(
            input=ex.input,
            expected=ex.expected,
            actual=None,
            actual_text=f"<error: {e}>",
            contains_hole=False,
            blame_origin=e.path,
            error=str(e),
        )
    return outcome


def check_all(tp, examples: list[GlobalExample], base: Env,
              fuel: int = DEFAULT_FUEL,
              extra: Optional[dict[str, Thunk]] = None) -> CheckOutcome:
    """Check every example, smallest input first.

    The first counterexample wins; otherwise local examples merge by
    concatenation. Fuel running out on any example (without a
    counterexample elsewhere) makes the whole check inconclusive.
    """
    merged = ConstraintSet()
    inconclusive: Optional[Inconclusive] = None
    for ex in sorted(examples, key=lambda e: (e.size, _ground_key(e.input))):
        outcome = check_example(tp, ex, base, fuel, extra)
        if isinstance(outcome, Counterexample):
            return outcome
        if isinstance(outcome, Inconclusive):
            inconclusive = inconclusive or outcome
            continue
        merged.add(outcome)
    if inconclusive is not None:
        return inconclusive
    return merged


def _ground_key(g: Ground):
    if isinstance(g, bool):
        return (1, g)
    if isinstance(g, int):
        return (0, g)
    if isinstance(g, list):
        return (2, tuple(_ground_key(x) for x in g))
    return (3, tuple(_ground_key(x) for x in g))


# --- local example utilities (used by the synthesizer and hole specs) --------


def local_example_text(ex: LocalExample, fn_name: str = "f") -> str:
    """Render a local example, e.g. ``f 2 == 1`` or ``f 2 [1, 3] == [1, 2, 3]``."""
    lhs = fn_name
    for a in ex.args:
        lhs += " " + _arg_text(a)
    return f"{lhs} == {ground_text(ex.expected)}"


def _arg_text(g: Ground) -> str:
    text = ground_text(g)
    return text


def satisfies(session: Session, candidate_value: Value, ex: LocalExample) -> Optional[bool]:
    """Does a value (the filling, evaluated in ``ex.env``) meet the example?

    Returns None when fuel or an error cut the check short.
    """
    from .interp import ground_to_value

    try:
        v = candidate_value
        for a in ex.args:
            v = session.apply(v, Thunk.from_value(ground_to_value(a)))
        if isinstance(v, VIndet):
            return None
        return session.to_ground(v) == ex.expected
    except (FuelExhausted, PrimitiveError, HoleInValue, RecursionError):
        return None
