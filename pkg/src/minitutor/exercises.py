"""Exercise documents: loading, validation, and the exercise store.

A document is one JSON object: id, description, signature, prelude
allow-list, model solutions, named properties (the name is the binding
name in the property source), and generator parameters. Validation
type-checks everything, generates the example set, checks that the
models agree on every input, and that every property holds for every
model output. A store only ever serves exercises that validated.
"""
from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Optional, Union

from . import hmtypes, prelude, typecheck
from .checker import ground_text
from .engine import (
    Exercise, ExerciseAuthoringError, GeneratorParams, generate_examples,
)
from .hmtypes import Scheme, TFun
from .interp import EvalError, HoleInValue, Session, Thunk, VBool, ground_to_value, program_env
from .lang import ast
from .lang.lexer import SyntaxErr
from .lang.parser import parse


def validate_exercise(doc: dict) -> Union[Exercise, list[str]]:
    """Build a validated Exercise from a document, or return every error."""
    errors: list[str] = []

    def need(key: str, typ) -> Optional[object]:
        if key not in doc:
            errors.append(f"missing field {key!r}")
            return None
        if not isinstance(doc[key], typ):
            errors.append(f"field {key!r} has the wrong type")
            return None
        return doc[key]

    ex_id = need("id", str)
    description = need("description", str)
    signature_text = need("signature", str)
    allowed = need("prelude", list)
    solutions = need("solutions", list)
    properties_src = need("properties", list)
    gen_doc = doc.get("generator", {})
    entry = doc.get("entry", ex_id)
    if errors:
        return errors

    signature: Optional[Scheme] = None
    try:
        signature = hmtypes.parse_type(signature_text)
        if not isinstance(signature.type, TFun):
            errors.append("signature is not a function type")
    except hmtypes.TypeErr as e:
        errors.append(f"bad signature: {e}")

    all_schemes = prelude.schemes()
    library: dict[str, Scheme] = {}
    for name in allowed:
        if name not in all_schemes:
            errors.append(f"prelude allow-list names unknown function {name!r}")
        else:
            library[name] = all_schemes[name]

    student_lib = dict(library)
    for name in prelude.ALWAYS_ALLOWED:
        student_lib[name] = all_schemes[name]

    models = []
    for i, src in enumerate(solutions):
        if not isinstance(src, str):
            errors.append(f"solution {i} is not a string")
            continue
        try:
            p = parse(src).with_entry(entry)
        except (SyntaxErr, KeyError) as e:
            errors.append(f"solution {i} does not parse or lacks {entry!r}: {e}")
            continue
        if ast.holes(p):
            errors.append(f"solution {i} contains holes")
            continue
        if signature is not None:
            try:
                typecheck.infer(p, student_lib, signature)
            except typecheck.TypeError_ as e:
                errors.append(f"solution {i} does not type-check: {e}")
                continue
        models.append((src, p))
    if not models and not errors:
        errors.append("no model solutions given")

    sig_arg = signature.type.arg if signature is not None and isinstance(signature.type, TFun) else None
    props: list[tuple[str, object]] = []
    for i, src in enumerate(properties_src):
        if not isinstance(src, str):
            errors.append(f"property {i} is not a string")
            continue
        try:
            p = parse(src)
        except SyntaxErr as e:
            errors.append(f"property {i} does not parse: {e}")
            continue
        name = p.entry
        if signature is not None:
            prop_lib = dict(all_schemes)
            prop_lib[entry] = signature
            try:
                tp = typecheck.infer(p, prop_lib, None)
                want = TFun(sig_arg, hmtypes.BOOL)
                hmtypes.unify(tp.entry_type, want)
            except (typecheck.TypeError_, hmtypes.TypeErr) as e:
                errors.append(f"property {name!r} is not a predicate on the input type: {e}")
                continue
        props.append((name, p))

    gen = GeneratorParams(
        max_len=int(gen_doc.get("max_len", 4)),
        max_val=int(gen_doc.get("max_val", 3)),
        random_count=int(gen_doc.get("random_count", 20)),
        random_max_len=int(gen_doc.get("random_max_len", 6)),
        seed=int(gen_doc.get("seed", 42)),
    )

    if errors:
        return errors

    ex = Exercise(
        id=ex_id, description=description, entry=entry,
        signature_text=signature_text, signature=signature,
        models=[p for _, p in models], model_sources=[s for s, _ in models],
        properties=props, allowed=list(allowed), generator=gen,
        library=library,
    )
    try:
        ex.examples = generate_examples(ex.models, ex.base_env, gen)
    except ExerciseAuthoringError as e:
        return errors + e.errors

    errors.extend(_check_properties_on_models(ex))
    if errors:
        return errors
    return ex


def _check_properties_on_models(ex: Exercise) -> list[str]:
    """Every property must hold for the model output on every input."""
    errors = []
    for name, prop in ex.properties:
        model_env = program_env(ex.models[0], ex.base_env)
        prop_env = program_env(prop, model_env)
        for gex in ex.examples:
            session = Session(200_000)
            try:
                fn = session.force(prop_env.lookup(prop.entry))
                v = session.apply(fn, Thunk.from_value(ground_to_value(gex.input)))
                if not (isinstance(v, VBool) and v.b):
                    errors.append(
                        f"property {name!r} fails on the model for input "
                        f"{ground_text(gex.input)}")
                    break
            except (EvalError, HoleInValue, RecursionError) as e:
                errors.append(f"property {name!r} crashes on {ground_text(gex.input)}: {e}")
                break
    return errors


def load_exercise_file(path: Union[str, Path]) -> Union[Exercise, list[str]]:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        return [f"cannot read {path}: {e}"]
    return validate_exercise(doc)


def bundled_exercise_docs() -> list[dict]:
    out = []
    for entry in resources.files("minitutor.data").iterdir():
        if entry.name.endswith(".json"):
            out.append(json.loads(entry.read_text(encoding="utf-8")))
    return out


class ExerciseStore:
    """Validated exercises by id; loading is all-or-nothing per file."""

    def __init__(self) -> None:
        self.exercises: dict[str, Exercise] = {}

    def add(self, ex: Exercise) -> None:
        if ex.id in self.exercises:
            raise ExerciseAuthoringError([f"duplicate exercise id {ex.id!r}"])
        self.exercises[ex.id] = ex

    def get(self, ex_id: str) -> Optional[Exercise]:
        return self.exercises.get(ex_id)

    def ids(self) -> list[str]:
        return sorted(self.exercises)

    @classmethod
    def load(cls, directory: Optional[Union[str, Path]] = None,
             include_bundled: bool = True) -> "ExerciseStore":
        """Load and validate exercises; any invalid document fails the load."""
        store = cls()
        if include_bundled:
            for doc in bundled_exercise_docs():
                result = validate_exercise(doc)
                if isinstance(result, list):
                    raise ExerciseAuthoringError(
                        [f"bundled exercise {doc.get('id')!r}: {e}" for e in result])
                store.add(result)
        if directory is not None:
            for path in sorted(Path(directory).glob("*.json")):
                result = load_exercise_file(path)
                if isinstance(result, list):
                    raise ExerciseAuthoringError(
                        [f"{path.name}: {e}" for e in result])
                store.add(result)
        return store
