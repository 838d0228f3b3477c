"""JSON wire format for feedback, shared by the HTTP API and the CLI.

Counterexamples and examples are rendered twice: structurally (ints,
bools, nested arrays; tuples and holes as tagged objects) for clients,
and as source-syntax text for logs and humans.
"""
from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field

from .checker import Counterexample, ground_text, local_example_text, value_json
from .engine import Exercise, Feedback, HoleSpec, RepairSuggestion
from .interp import Ground, Session
from .synthesis import Conflict


def ground_json(g: Ground) -> Any:
    if isinstance(g, bool) or isinstance(g, int):
        return g
    if isinstance(g, list):
        return [ground_json(x) for x in g]
    if isinstance(g, tuple):
        return {"tuple": [ground_json(x) for x in g]}
    raise TypeError(g)


class LocalExampleWire(BaseModel):
    text: str
    env: dict[str, Any] = Field(default_factory=dict)
    args: list[Any] = Field(default_factory=list)
    expected: Any = None
    source_input: Optional[Any] = None


class CounterexampleWire(BaseModel):
    input: Any
    expected: Any
    actual: Optional[Any] = None
    text: str
    actual_text: str
    contains_hole: bool = False
    error: Optional[str] = None


class ConflictGroupWire(BaseModel):
    examples: list[LocalExampleWire]


class ConflictWire(BaseModel):
    hole: int
    groups: list[ConflictGroupWire]
    pair: list[LocalExampleWire]  # the first clashing pair, for compact display


class HoleSpecWire(BaseModel):
    hole: int
    examples: list[LocalExampleWire]


class RepairWire(BaseModel):
    program: str
    replaced_paths: list[list[int]]
    replaced: list[str]


class ErrorWire(BaseModel):
    kind: str
    message: str
    line: Optional[int] = None
    col: Optional[int] = None


class FeedbackResponse(BaseModel):
    model_config = ConfigDict(extra="forbid")

    classification: str
    exercise_id: str
    counterexample: Optional[CounterexampleWire] = None
    violated_properties: list[str] = Field(default_factory=list)
    properties_skipped: bool = False
    conflict: Optional[ConflictWire] = None
    hole_specs: list[HoleSpecWire] = Field(default_factory=list)
    repair: Optional[RepairWire] = None
    advice: Optional[str] = None
    error: Optional[ErrorWire] = None
    diagnostics: dict[str, Any] = Field(default_factory=dict)


class ExerciseInfo(BaseModel):
    id: str
    description: str
    signature: str


class ExerciseDetail(ExerciseInfo):
    entry: str
    prelude: list[str]
    properties: list[str]


class FeedbackRequest(BaseModel):
    source: str
    budget_ms: Optional[int] = Field(default=None, ge=1)


def _cex_wire(entry: str, cex: Counterexample) -> CounterexampleWire:
    session = Session(10_000)
    actual = value_json(session, cex.actual) if cex.actual is not None else None
    text = f"{entry} {ground_text(cex.input)} == {cex.actual_text}"
    return CounterexampleWire(
        input=ground_json(cex.input),
        expected=ground_json(cex.expected),
        actual=actual,
        text=text,
        actual_text=cex.actual_text,
        contains_hole=cex.contains_hole,
        error=cex.error,
    )


def _local_wire(lex) -> LocalExampleWire:
    return LocalExampleWire(
        text=local_example_text(lex),
        env={name: ground_json(v) for name, v in lex.env},
        args=[ground_json(a) for a in lex.args],
        expected=ground_json(lex.expected),
        source_input=ground_json(lex.source_input) if lex.source_input is not None else None,
    )


def _conflict_wire(c: Conflict) -> ConflictWire:
    groups = [ConflictGroupWire(examples=[_local_wire(e) for e in g.examples])
              for g in c.groups]
    first = c.groups[0].pair
    return ConflictWire(hole=c.hole_id, groups=groups,
                        pair=[_local_wire(first[0]), _local_wire(first[1])])


def _spec_wire(spec: HoleSpec) -> HoleSpecWire:
    return HoleSpecWire(
        hole=spec.hole_id,
        examples=[
            LocalExampleWire(
                text=e.text,
                env={name: ground_json(v) for name, v in e.env},
                args=[ground_json(a) for a in e.args],
                expected=ground_json(e.expected),
            )
            for e in spec.examples
        ],
    )


def _repair_wire(r: RepairSuggestion) -> RepairWire:
    return RepairWire(program=r.program_text,
                      replaced_paths=[list(p) for p in r.replaced_paths],
                      replaced=list(r.replaced_texts))


def to_response(ex: Exercise, fb: Feedback) -> FeedbackResponse:
    diagnostics = dict(fb.diagnostics)
    # Identical requests must produce identical bodies (modulo latency).
    # Candidate counts are deterministic only when search ran to a
    # deterministic end: a successful synthesis, or none at all (conflict
    # short-circuit). Anywhere a wall-clock timeout was involved the count
    # wobbles, so it stays out of the wire format.
    deterministic_count = (
        fb.conflict is not None
        or fb.classification.value in ("Correct", "OnTrack")
    )
    if not deterministic_count:
        diagnostics.pop("candidates", None)
    diagnostics.pop("recovery_candidates", None)
    return FeedbackResponse(
        classification=fb.classification.value,
        exercise_id=fb.exercise_id,
        counterexample=_cex_wire(ex.entry, fb.counterexample) if fb.counterexample else None,
        violated_properties=list(fb.violated_properties),
        properties_skipped=fb.properties_skipped,
        conflict=_conflict_wire(fb.conflict) if fb.conflict else None,
        hole_specs=[_spec_wire(s) for s in fb.hole_specs],
        repair=_repair_wire(fb.repair) if fb.repair else None,
        advice=fb.advice,
        error=ErrorWire(kind=fb.error.kind, message=fb.error.message,
                        line=fb.error.line, col=fb.error.col) if fb.error else None,
        diagnostics=diagnostics,
    )


def exercise_info(ex: Exercise) -> ExerciseInfo:
    return ExerciseInfo(id=ex.id, description=ex.description, signature=ex.signature_text)


def exercise_detail(ex: Exercise) -> ExerciseDetail:
    return ExerciseDetail(id=ex.id, description=ex.description,
                          signature=ex.signature_text, entry=ex.entry,
                          prelude=list(ex.allowed),
                          properties=[name for name, _ in ex.properties])
