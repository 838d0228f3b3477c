"""The feedback pipeline: exercises, classification, blame and recovery.

An exercise bundles model solutions, properties and an allow-list; a
student submission is parsed, typed, checked against the generated
example set, and then either declared correct, finished by synthesis
(on track), or walked back to a repairable state by replacing blamed
subtrees with holes (off track). Synthesis that only times out means we
cannot rule the attempt out, just that it is more complex than the
models suggest.
"""
from __future__ import annotations

import enum
import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Optional, Union

from . import hmtypes, prelude, typecheck
from .checker import (
    ConstraintSet, Counterexample, GlobalExample, Inconclusive, LocalExample,
    check_all, ground_text, value_json, value_text,
)
from .config import Budgets
from .hmtypes import Scheme
from .interp import (
    Env, EvalError, FuelExhausted, Ground, HoleInValue, PrimitiveError,
    Session, Thunk, Value, VBool, VPrim, eval_entry, ground_to_value,
    program_env, run_model,
)
from .lang import ast
from .lang.ast import Binding, Expr, Hole, Lam, Let, Program, PVar, Var
from .lang.lexer import SyntaxErr
from .lang.parser import parse
from .lang.pretty import expr_text, pretty
from .synthesis import (
    Budget as SynthBudget, Conflict, CostModel, Exhausted, NoConflict,
    Success, SynthesisTask, Timeout, detect_conflict, fill_program,
    learn_cost_model, synthesize, verify_filling,
)
from .typecheck import TypedProgram, TypeError_


class ExerciseAuthoringError(Exception):
    def __init__(self, errors: list[str]):
        self.errors = errors
        super().__init__("; ".join(errors))


@dataclass(frozen=True)
class GeneratorParams:
    max_len: int = 4
    max_val: int = 3
    random_count: int = 20
    random_max_len: int = 6
    seed: int = 42


@dataclass
class Exercise:
    id: str
    description: str
    entry: str
    signature_text: str
    signature: Scheme
    models: list[Program]
    model_sources: list[str]
    properties: list[tuple[str, Program]]
    allowed: list[str]
    generator: GeneratorParams
    examples: list[GlobalExample] = field(default_factory=list)
    library: dict[str, Scheme] = field(default_factory=dict)
    base_env: Env = field(default_factory=prelude.global_env)

    def check_library(self) -> dict[str, Scheme]:
        """Schemes visible to student programs: allow-list plus operators."""
        lib = dict(self.library)
        for name in prelude.ALWAYS_ALLOWED:
            lib[name] = prelude.schemes()[name]
        return lib


def generate_examples(models: list[Program], base: Env, params: GeneratorParams,
                      fuel: int = 100_000) -> list[GlobalExample]:
    """Every int list up to the size bound, plus seeded random ones.

    Outputs come from the first model; the models must agree on every
    input (anything else is an authoring error).
    """
    inputs: list[list[int]] = []
    seen: set[tuple] = set()
    for n in range(params.max_len + 1):
        for combo in itertools.product(range(params.max_val + 1), repeat=n):
            if combo not in seen:
                seen.add(combo)
                inputs.append(list(combo))
    rng = random.Random(params.seed)
    for _ in range(params.random_count):
        n = rng.randint(0, params.random_max_len)
        combo = tuple(rng.randint(0, params.max_val) for _ in range(n))
        if combo not in seen:
            seen.add(combo)
            inputs.append(list(combo))

    examples = []
    for inp in inputs:
        try:
            out = run_model(models[0], base, inp, fuel)
        except (EvalError, HoleInValue, RecursionError) as e:
            raise ExerciseAuthoringError(
                [f"model solution fails on input {ground_text(inp)}: {e}"]) from e
        for i, other in enumerate(models[1:], start=1):
            other_out = run_model(other, base, inp, fuel)
            if other_out != out:
                raise ExerciseAuthoringError(
                    [f"model solutions disagree on input {ground_text(inp)}: "
                     f"{ground_text(out)} vs {ground_text(other_out)}"])
        examples.append(GlobalExample(inp, out))
    examples.sort(key=lambda e: (e.size, _stable_key(e.input)))
    return examples


def _stable_key(g: Ground):
    if isinstance(g, bool):
        return (1, g)
    if isinstance(g, int):
        return (0, g)
    return (2, tuple(_stable_key(x) for x in g))  # type: ignore[union-attr]


# --- feedback model -----------------------------------------------------------


class Classification(str, enum.Enum):
    CORRECT = "Correct"
    ON_TRACK = "OnTrack"
    OFF_TRACK = "OffTrack"
    TOO_COMPLEX = "TooComplex"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class FailedHole:
    hole_id: int


@dataclass
class RepairStep:
    blamed_path: ast.Path
    blamed_text: str
    program_after: Program

    @property
    def program_text(self) -> str:
        return pretty(self.program_after)


@dataclass
class RepairSuggestion:
    program: Program
    replaced_paths: list[ast.Path]
    replaced_texts: list[str]
    steps: list[RepairStep]
    cost: float

    @property
    def program_text(self) -> str:
        return pretty(self.program)


@dataclass
class BudgetExhausted:
    steps: list[RepairStep]
    reason: str


@dataclass
class HoleSpecExample:
    env: list[tuple[str, Ground]]
    args: list[Ground]
    expected: Ground
    text: str


@dataclass
class HoleSpec:
    hole_id: int
    examples: list[HoleSpecExample]
    filling: Expr  # retained server-side, not shown to the student

    @property
    def filling_text(self) -> str:
        return expr_text(self.filling)


@dataclass
class ErrorInfo:
    kind: str
    message: str
    line: Optional[int] = None
    col: Optional[int] = None


@dataclass
class Feedback:
    classification: Classification
    exercise_id: str
    source: str
    counterexample: Optional[Counterexample] = None
    violated_properties: list[str] = field(default_factory=list)
    properties_skipped: bool = False
    conflict: Optional[Conflict] = None
    hole_specs: list[HoleSpec] = field(default_factory=list)
    repair: Optional[RepairSuggestion] = None
    recovery_failed: Optional[BudgetExhausted] = None
    advice: Optional[str] = None
    error: Optional[ErrorInfo] = None
    retained_filling: Optional[dict[int, Expr]] = None
    diagnostics: dict = field(default_factory=dict)


# --- pipeline pieces -----------------------------------------------------------


def check_properties(ex: Exercise, cex: Counterexample,
                     fuel: int = 100_000) -> tuple[list[str], bool]:
    """Which properties does the observed input/output pair violate?

    The entry function inside each property is replaced by the observed
    pair; a property that needs the entry on any other input is skipped.
    A counterexample still containing holes skips checking entirely.
    """
    if cex.contains_hole or cex.error is not None or cex.actual is None:
        return [], True

    probe = Session(fuel)
    try:
        actual_ground = probe.to_ground(cex.actual)
    except (EvalError, HoleInValue, RecursionError):
        return [], True

    violated = []
    for name, prop in ex.properties:
        session = Session(fuel)
        pair_prim = _observed_pair_prim(cex.input, actual_ground)
        env = program_env(prop, ex.base_env, extra={ex.entry: Thunk.from_value(pair_prim)})
        try:
            fn = session.force(env.lookup(prop.entry))
            v = session.apply(fn, Thunk.from_value(ground_to_value(cex.input)))
            if isinstance(v, VBool) and not v.b:
                violated.append(name)
        except _Underdetermined:
            continue
        except (EvalError, HoleInValue, RecursionError):
            continue
    return violated, False


class _Underdetermined(EvalError):
    pass


def _observed_pair_prim(inp: Ground, out: Ground) -> VPrim:
    def fn(session: Session, args, origin) -> Value:
        arg = session.to_ground(session.force(args[0]))
        if arg != inp:
            raise _Underdetermined(f"entry function observed only on {inp!r}")
        return ground_to_value(out)

    return VPrim("<observed>", 1, fn)


def blame(program: Program, evidence: Union[Counterexample, FailedHole]) -> ast.Path:
    """Map failure evidence to the program point to replace next."""
    if isinstance(evidence, FailedHole):
        site = next((h for h in ast.holes(program) if h.hole_id == evidence.hole_id), None)
        if site is None:
            return _entry_root(program)
        path = site.path[:-1] if len(site.path) > 1 else site.path
        # a parent that is only part of a curried application spine widens
        # to the full application (replace `f ? x`, not `f ?`)
        while len(path) > 1 and path[-1] == 0 and isinstance(
                ast.node_at(program, path[:-1]), ast.App):
            path = path[:-1]
        return path
    if evidence.blame_origin is not None:
        try:
            ast.node_at(program, evidence.blame_origin)
            return evidence.blame_origin
        except ast.InvalidPath:
            pass
    return _entry_root(program)


def _entry_root(program: Program) -> ast.Path:
    for i, b in enumerate(program.bindings):
        if b.name == program.entry:
            return (i,)
    return (0,)


def _synth_task(ex: Exercise, tp: TypedProgram, k: ConstraintSet,
                budgets: Budgets, time_ms: Optional[int] = None) -> SynthesisTask:
    subset = ex.examples[: budgets.check_subset]
    return SynthesisTask(
        typed=tp,
        constraints=k,
        # everything a student may write, operators included
        library=ex.check_library(),
        entry=ex.entry,
        signature=ex.signature,
        model=ex.models[0],
        examples=ex.examples,
        check_examples=subset,
        properties=ex.properties,
        base_env=ex.base_env,
        budget=SynthBudget(
            time_ms=time_ms if time_ms is not None else budgets.synth_time_ms,
            max_candidates=budgets.synth_max_candidates,
            max_hole_nodes=budgets.max_hole_nodes,
            check_fuel=budgets.check_fuel,
            verify_fuel=budgets.verify_fuel,
        ),
    )


def recover(ex: Exercise, program: Program,
            evidence: Union[Counterexample, FailedHole],
            budgets: Budgets, cm: Optional[CostModel] = None,
            diagnostics: Optional[dict] = None) -> Union[RepairSuggestion, BudgetExhausted]:
    """Replace blamed subtrees with holes until synthesis finds a repair.

    Iterations are bounded by the program's node count (each replacement
    strictly shrinks it) and by a wall-clock budget shared across the
    whole loop. Each iteration's synthesis gets a slice of that budget,
    never the whole of it: an unfillable intermediate state must not
    starve the later, more-holed states (in the worst case the entire
    body becomes one hole and synthesis rebuilds a model-shaped
    solution, which must still get its turn).
    """
    cm = cm or learn_cost_model(ex.models, ex.check_library())
    deadline = time.monotonic() + budgets.recovery_time_ms / 1000.0
    slice_ms = max(200, budgets.recovery_time_ms // 5)
    steps: list[RepairStep] = []
    replaced: list[ast.Path] = []
    replaced_texts: list[str] = []
    p_cur = program
    max_iters = max(1, ast.node_count(program))

    for _ in range(max_iters):
        blamed = blame(p_cur, evidence)
        node = ast.node_at(p_cur, blamed)
        if isinstance(node, Hole):
            return BudgetExhausted(steps, "blamed node is already a hole")
        p_next = ast.replace_at(p_cur, blamed, Hole(ast.fresh_hole_id(p_cur)))
        steps.append(RepairStep(blamed, expr_text(node), p_next))
        replaced.append(blamed)
        replaced_texts.append(expr_text(node))

        try:
            tp = typecheck.infer(p_next, ex.check_library(), ex.signature)
        except typecheck.TypeError_:
            return BudgetExhausted(steps, "replacement no longer type-checks")
        outcome = check_all(tp, ex.examples, ex.base_env, budgets.eval_fuel)
        if isinstance(outcome, Counterexample):
            evidence = outcome
            p_cur = p_next
            continue
        if isinstance(outcome, Inconclusive):
            return BudgetExhausted(steps, "checking became inconclusive")

        remaining_ms = int((deadline - time.monotonic()) * 1000)
        if remaining_ms <= 0:
            return BudgetExhausted(steps, "recovery budget exhausted")
        task = _synth_task(ex, tp, outcome, budgets, time_ms=min(remaining_ms, slice_ms))
        result = synthesize(task, cm)
        if diagnostics is not None:
            diagnostics["candidates"] = diagnostics.get("candidates", 0) + getattr(result, "candidates", 0)
        if isinstance(result, Success):
            repaired = fill_program(p_next, result.filling, ex.entry)
            return RepairSuggestion(repaired, replaced, replaced_texts, steps, result.cost)
        if isinstance(result, Conflict):
            evidence = FailedHole(result.hole_id)
        else:
            hole_sites = ast.holes(p_next)
            if not hole_sites:
                return BudgetExhausted(steps, "nothing left to replace")
            evidence = FailedHole(hole_sites[0].hole_id)
        p_cur = p_next

    return BudgetExhausted(steps, "iteration bound reached")


# --- hole specifications -------------------------------------------------------


def hole_specs(ex: Exercise, tp: TypedProgram, filling: dict[int, Expr],
               k: ConstraintSet, budgets: Budgets) -> list[HoleSpec]:
    """Local examples per hole, rendered for the student and machine-checked
    against the retained filling."""
    out: list[HoleSpec] = []
    named = _body_holes(tp.program)
    for site in ast.holes(tp.program):
        hid = site.hole_id
        if hid not in filling:
            continue
        examples: list[HoleSpecExample] = []
        seen: set = set()
        for lex in k.locals.get(hid, []):
            rendered = _render_local(lex, hid, named)
            if rendered is None or rendered.text in seen:
                continue
            if not _spec_example_ok(ex, filling, hid, dict(lex.env), rendered, budgets):
                continue
            seen.add(rendered.text)
            examples.append(rendered)
            if len(examples) >= budgets.hole_spec_examples:
                break
        if len(examples) < 3:
            extra = _probe_examples(ex, tp, filling, hid, named, budgets,
                                    want=budgets.hole_spec_examples - len(examples),
                                    seen=seen)
            examples.extend(extra)
        out.append(HoleSpec(hid, examples, filling[hid]))
    return out


def _body_holes(program: Program) -> dict[int, tuple[str, list[str]]]:
    """Holes that are the entire body of a named local function."""
    out: dict[int, tuple[str, list[str]]] = {}

    def visit_binding(b: Binding) -> None:
        params = []
        e: Expr = b.expr
        while isinstance(e, Lam) and isinstance(e.param, PVar):
            params.append(e.param.name)
            e = e.body
        if isinstance(e, Hole):
            out[e.hole_id] = (b.name, params)

    for _, node in ast.iter_paths(program):
        if isinstance(node, ast.Case):
            for alt in node.alts:
                for b in alt.where:
                    visit_binding(b)
        elif isinstance(node, Let):
            for b in node.bindings:
                visit_binding(b)
    return out


def _shown_env(env: dict[str, Ground]) -> list[tuple[str, Ground]]:
    """Environment entries worth showing; generated binders stay hidden."""
    return [(n, v) for n, v in sorted(env.items()) if not n.startswith("_")]


def _render_local(lex: LocalExample, hid: int,
                  named: dict[int, tuple[str, list[str]]]) -> Optional[HoleSpecExample]:
    env = dict(lex.env)
    if hid in named:
        fn_name, params = named[hid]
        if all(p in env for p in params) and not lex.args:
            text = " ".join([fn_name] + [_atom(ground_text(env[p])) for p in params])
            text += f" == {ground_text(lex.expected)}"
            shown = [(p, env[p]) for p in params]
            return HoleSpecExample(shown, [], lex.expected, text)
        return None
    if lex.args:
        text = " ".join(["f"] + [_atom(ground_text(a)) for a in lex.args])
        text += f" == {ground_text(lex.expected)}"
        return HoleSpecExample(_shown_env(env), list(lex.args), lex.expected, text)
    shown = _shown_env(env)
    text = f"?{hid} == {ground_text(lex.expected)}"
    if shown:
        text += " when " + ", ".join(f"{n} = {ground_text(v)}" for n, v in shown)
    return HoleSpecExample(shown, [], lex.expected, text)


def _atom(text: str) -> str:
    return text if not text or text[0] in "[(" or text.lstrip("-").isdigit() else f"({text})"


def _spec_example_ok(ex: Exercise, filling: dict[int, Expr], hid: int,
                     full_env: dict[str, Ground], rendered: HoleSpecExample,
                     budgets: Budgets) -> bool:
    """Faithfulness: the retained filling must satisfy the shown example.

    The filling runs in the full grounded environment of the observation,
    with the entry name answered by the model solution.
    """
    session = Session(budgets.check_fuel)
    frame = {name: Thunk.from_value(ground_to_value(v)) for name, v in full_env.items()}
    env = program_env(ex.models[0], ex.base_env).child(frame)
    try:
        v = session.eval(filling[hid], env, None)
        for a in rendered.args:
            v = session.apply(v, Thunk.from_value(ground_to_value(a)))
        return session.to_ground(v) == rendered.expected
    except (EvalError, HoleInValue, RecursionError):
        return False


def _groundable_type(t: hmtypes.Type) -> bool:
    match t:
        case hmtypes.TFun():
            return False
        case hmtypes.TList(item):
            return _groundable_type(item)
        case hmtypes.TTuple(items):
            return all(_groundable_type(i) for i in items)
        case _:
            return True


def _probe_examples(ex: Exercise, tp: TypedProgram, filling: dict[int, Expr],
                    hid: int, named: dict[int, tuple[str, list[str]]],
                    budgets: Budgets, want: int, seen: set) -> list[HoleSpecExample]:
    """Run the filled program and log the hole region's traffic.

    Value-typed holes log (environment, value) per evaluation of the
    region; function-typed holes log full applications of the filling.
    """
    if want <= 0:
        return []
    info = tp.holes.get(hid)
    if info is None:
        return []
    site = next((h for h in ast.holes(tp.program) if h.hole_id == hid), None)
    if site is None:
        return []
    fn_arity = len(hmtypes.uncurry(info.type)[0])
    local_names = sorted(n for n in info.local_env
                         if _groundable_type(info.local_env[n].type))

    log: list[tuple[dict, tuple[Ground, ...], Ground]] = []
    probe_name = f"$probe{hid}"

    def value_probe(session: Session, args, origin) -> Value:
        v = session.force(args[0])
        items_t = v.items  # type: ignore[union-attr]
        result = session.force(items_t[-1])
        try:
            items = [session.to_ground(session.force(t)) for t in items_t[:-1]]
            env_vals = dict(zip(local_names, items))
            log.append((env_vals, (), session.to_ground(result)))
        except (EvalError, HoleInValue, RecursionError):
            pass
        return result

    def fn_probe(session: Session, args, origin) -> Value:
        tup = session.force(args[0])
        items_t = tup.items  # type: ignore[union-attr]
        inner = items_t[-1]
        try:
            env_vals = dict(zip(local_names,
                                [session.to_ground(session.force(t)) for t in items_t[:-1]]))
        except (EvalError, HoleInValue, RecursionError):
            env_vals = None

        def applied(session2: Session, call_args, origin2) -> Value:
            v = session2.force(inner)
            for a in call_args:
                v = session2.apply(v, a)
            if env_vals is not None:
                try:
                    grounds = tuple(session2.to_ground(session2.force(a)) for a in call_args)
                    log.append((env_vals, grounds, session2.to_ground(v)))
                except (EvalError, HoleInValue, RecursionError):
                    pass
            return v

        return VPrim(f"{probe_name}.app", fn_arity, applied)

    probe_fn = fn_probe if fn_arity > 0 else value_probe
    probe_expr = ast.App(Var(probe_name),
                         ast.TupleLit(tuple(Var(n) for n in local_names)
                                      + (filling[hid],)))
    program = fill_program(tp.program, {h: e for h, e in filling.items() if h != hid},
                           ex.entry)
    site2 = next((h for h in ast.holes(program) if h.hole_id == hid), None)
    if site2 is None:
        return []
    program = ast.replace_at(program, site2.path, probe_expr)

    extra = {probe_name: Thunk.from_value(VPrim(probe_name, 1, probe_fn))}
    out: list[HoleSpecExample] = []
    for gex in ex.examples:
        if len(out) >= want or len(log) > 300:
            break
        session = Session(budgets.check_fuel)
        try:
            out_v = eval_entry(session, program, ex.base_env, gex.input, extra)
            session.to_ground(out_v)
        except (EvalError, HoleInValue, RecursionError):
            continue
        while log and len(out) < want:
            env_vals, call_args, value = log.pop(0)
            lex = LocalExample(hid, tuple(sorted(env_vals.items())), call_args, value,
                               source_input=None, env_complete=True)  # type: ignore[arg-type]
            rendered = _render_local(lex, hid, named)
            if rendered is None or rendered.text in seen:
                continue
            if not _spec_example_ok(ex, filling, hid, dict(env_vals), rendered, budgets):
                continue
            seen.add(rendered.text)
            out.append(rendered)
    return out


# --- the pipeline ---------------------------------------------------------------


def advice_head(ex: Exercise) -> str:
    """Head construct of the first model solution, as approach advice."""
    e: Expr = ex.models[0].entry_binding.expr
    while isinstance(e, (Lam, Let)):
        e = e.body
    while isinstance(e, ast.App):
        e = e.fn
    if isinstance(e, Var):
        return e.name
    if isinstance(e, ast.Case):
        return "case analysis"
    return type(e).__name__.lower()


def give_feedback(ex: Exercise, source: str, budgets: Optional[Budgets] = None,
                  cost_model: Optional[CostModel] = None) -> Feedback:
    budgets = budgets or Budgets()
    t_start = time.monotonic()
    diagnostics: dict = {"candidates": 0}

    def done(fb: Feedback) -> Feedback:
        fb.diagnostics.setdefault("candidates", diagnostics.get("candidates", 0))
        fb.diagnostics["latency_ms"] = int((time.monotonic() - t_start) * 1000)
        return fb

    try:
        program = parse(source).with_entry(ex.entry)
    except SyntaxErr as e:
        return done(Feedback(Classification.OFF_TRACK, ex.id, source,
                             error=ErrorInfo("SyntaxError", e.message, e.line, e.col),
                             diagnostics={"stage": "parse"}))
    except (KeyError, ast.LangError) as e:
        msg = (f"program must define the entry function {ex.entry!r}"
               if isinstance(e, KeyError) else str(e))
        return done(Feedback(Classification.OFF_TRACK, ex.id, source,
                             error=ErrorInfo("SyntaxError", msg),
                             diagnostics={"stage": "parse"}))

    try:
        tp = typecheck.infer(program, ex.check_library(), ex.signature)
    except TypeError_ as e:
        kind = "UnboundVariable" if isinstance(e, typecheck.UnboundVariable) else "TypeError"
        return done(Feedback(Classification.OFF_TRACK, ex.id, source,
                             error=ErrorInfo(kind, str(e)),
                             diagnostics={"stage": "typecheck"}))

    cm = cost_model or learn_cost_model(ex.models, ex.check_library())
    outcome = check_all(tp, ex.examples, ex.base_env, budgets.eval_fuel)
    diagnostics["stage"] = "checked"

    if isinstance(outcome, Inconclusive):
        return done(Feedback(Classification.INCONCLUSIVE, ex.id, source,
                             diagnostics={"reason": outcome.reason,
                                          "input": outcome.input}))

    if isinstance(outcome, Counterexample):
        violated, skipped = check_properties(ex, outcome, budgets.eval_fuel)
        outcome.violated_properties = violated
        result = recover(ex, program, outcome, budgets, cm, diagnostics)
        fb = Feedback(Classification.OFF_TRACK, ex.id, source,
                      counterexample=outcome, violated_properties=violated,
                      properties_skipped=skipped)
        _attach_recovery(fb, result)
        return done(fb)

    k = outcome
    conflict = detect_conflict(k)
    if isinstance(conflict, Conflict):
        diagnostics["candidates"] = 0
        result = recover(ex, program, FailedHole(conflict.hole_id), budgets, cm, diagnostics)
        fb = Feedback(Classification.OFF_TRACK, ex.id, source, conflict=conflict,
                      diagnostics={"synthesis_skipped": True, "candidates": 0})
        _attach_recovery(fb, result)
        fb.diagnostics["recovery_candidates"] = diagnostics.get("candidates", 0)
        return done(fb)

    holes = ast.holes(program)
    if not holes:
        ok, witnesses = verify_filling(program, {}, ex.examples, ex.properties,
                                       ex.base_env, ex.entry, budgets.verify_fuel)
        if ok:
            return done(Feedback(Classification.CORRECT, ex.id, source))
        return done(Feedback(Classification.OFF_TRACK, ex.id, source,
                             diagnostics={"verify_witnesses": witnesses}))

    task = _synth_task(ex, tp, k, budgets)
    result = synthesize(task, cm)
    diagnostics["candidates"] = getattr(result, "candidates", 0)

    if isinstance(result, Success):
        specs = hole_specs(ex, tp, result.filling, k, budgets)
        return done(Feedback(Classification.ON_TRACK, ex.id, source,
                             hole_specs=specs, retained_filling=result.filling,
                             diagnostics={"candidates": result.candidates,
                                          "filling_cost": result.cost}))
    if isinstance(result, Timeout):
        return done(Feedback(Classification.TOO_COMPLEX, ex.id, source,
                             advice=advice_head(ex),
                             diagnostics={"candidates": result.candidates,
                                          "synthesis": "timeout"}))
    if isinstance(result, Conflict):  # pre-checked, but keep the branch total
        fb = Feedback(Classification.OFF_TRACK, ex.id, source, conflict=result)
        return done(fb)

    # exhausted: the space is closed and nothing fits
    first_hole = holes[0].hole_id
    rec = recover(ex, program, FailedHole(first_hole), budgets, cm, diagnostics)
    fb = Feedback(Classification.OFF_TRACK, ex.id, source,
                  diagnostics={"synthesis": "exhausted",
                               "candidates": result.candidates})
    _attach_recovery(fb, rec)
    return done(fb)


def _attach_recovery(fb: Feedback, result: Union[RepairSuggestion, BudgetExhausted]) -> None:
    if isinstance(result, RepairSuggestion):
        fb.repair = result
    else:
        fb.recovery_failed = result
