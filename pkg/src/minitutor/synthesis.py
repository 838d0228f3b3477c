"""Type-and-example-directed search for hole fillings.

Candidates are enumerated per hole, best-first by accumulated production
cost (A*: cost so far plus open-goal count times the cheapest
production). A cost model learned from the model solutions makes their
vocabulary cheap, so student-plausible fillings surface early. Holes are
filled left to right; every candidate must satisfy the hole's ground
local examples and the whole prefix must survive re-checking against a
subset of the global examples. A complete filling is accepted only after
verification against the full example set and all properties.

Recursive calls inside candidates are a special name bound to a guarded
primitive: the argument must be a proper substructure of the current
input, and the call runs the model solution instead of the student's
partial program.
"""
from __future__ import annotations

import heapq
import itertools
import time
from dataclasses import dataclass, field
from typing import Optional, Union

from . import hmtypes
from .checker import (
    CheckOutcome, ConstraintSet, Counterexample, GlobalExample, Inconclusive,
    LocalExample, check_all,
)
from .hmtypes import Scheme, Subst, TFun, TList, TTuple, Type, INT, BOOL
from .interp import (
    Env, EvalError, FuelExhausted, Ground, HoleInValue, PrimitiveError,
    Session, Thunk, Value, VIndet, VPrim, eval_entry, ground_to_value,
    strict_substructure,
)
from .lang import ast
from .lang.ast import App, BoolLit, Expr, Hole, IntLit, Lam, ListLit, Program, PVar, TupleLit, Var
from .typecheck import TypedProgram

REC_NAME = "$rec"


class RecursionGuardError(EvalError):
    """A candidate called the entry function on a non-decreasing argument."""


# --- cost model ----------------------------------------------------------


@dataclass
class CostModel:
    """Production costs; lower cost is tried first."""

    costs: dict[str, float] = field(default_factory=dict)
    model_cost: float = 1.0     # productions seen in a model solution
    generic_cost: float = 2.0   # constructs and literal classes never seen
    absent_name_cost: float = 4.0  # library names absent from every model

    def name(self, name: str) -> float:
        key = f"name:{name}"
        if key in self.costs:
            return self.costs[key]
        return self.absent_name_cost

    def var(self) -> float:
        return self.costs.get("var", self.generic_cost)

    def construct(self, kind: str) -> float:
        return self.costs.get(kind, self.generic_cost)

    @property
    def min_cost(self) -> float:
        values = list(self.costs.values()) + [self.generic_cost]
        return min(values)


def uniform_cost_model() -> CostModel:
    return CostModel(costs={}, model_cost=1.0, generic_cost=1.0, absent_name_cost=1.0)


def learn_cost_model(models: list[Program], library: dict[str, Scheme],
                     model_cost: float = 1.0, generic_cost: float = 2.0,
                     absent_name_cost: float = 4.0) -> CostModel:
    """Make every production that occurs in a model solution cheap."""
    seen: set[str] = set()
    for model in models:
        bound = {b.name for b in model.bindings}
        for _, node in ast.iter_paths(model):
            match node:
                case Var(name):
                    if name in library or name in bound:
                        seen.add(f"name:{name}")
                    else:
                        seen.add("var")
                case App():
                    seen.add("app")
                case Lam():
                    seen.add("lam")
                case IntLit():
                    seen.add("lit:int")
                case BoolLit():
                    seen.add("lit:bool")
                case ListLit():
                    seen.add("lit:list")
                case TupleLit():
                    seen.add("lit:tuple")
                case _:
                    pass
        for b in model.bindings:
            seen.add(f"name:{b.name}")
    return CostModel(costs={key: model_cost for key in seen},
                     model_cost=model_cost, generic_cost=generic_cost,
                     absent_name_cost=absent_name_cost)


# --- conflicts ------------------------------------------------------------


@dataclass
class ConflictGroup:
    """Local examples demanding different outputs for one hole input."""

    key: tuple
    examples: list[LocalExample]  # one per distinct expected value, merge order

    @property
    def pair(self) -> tuple[LocalExample, LocalExample]:
        return self.examples[0], self.examples[1]


@dataclass
class Conflict:
    hole_id: int
    groups: list[ConflictGroup]
    candidates: int = 0

    def contains_pair(self, args: tuple, expected_a: Ground, expected_b: Ground) -> bool:
        for g in self.groups:
            exps = [ex.expected for ex in g.examples if ex.args == args]
            if expected_a in exps and expected_b in exps:
                return True
        return False


@dataclass
class NoConflict:
    pass


def detect_conflict(k: ConstraintSet) -> Union[Conflict, NoConflict]:
    """A hole conflicts when two complete local examples from the same
    global example share an input (environment and arguments) but demand
    different outputs.

    Scoping to one global example matters: merged example sets routinely
    pin the same local input to different outputs across different runs
    (the hole's surroundings differ), which says nothing about the hole
    being unfillable on any single run.
    """
    for hid in sorted(k.locals):
        groups: dict[tuple, ConflictGroup] = {}
        order: list[tuple] = []
        for ex in k.locals[hid]:
            if not ex.env_complete:
                continue
            key = (_freeze(ex.source_input),) + ex.key()
            g = groups.get(key)
            if g is None:
                groups[key] = ConflictGroup(key, [ex])
                order.append(key)
            elif all(ex.expected != seen.expected for seen in g.examples):
                g.examples.append(ex)
        conflicting = [groups[key] for key in order if len(groups[key].examples) > 1]
        if conflicting:
            return Conflict(hid, conflicting)
    return NoConflict()


# --- outcomes and task -----------------------------------------------------


@dataclass
class Success:
    filling: dict[int, Expr]
    cost: float
    candidates: int


@dataclass
class Exhausted:
    candidates: int


@dataclass
class Timeout:
    candidates: int


SynthesisOutcome = Union[Success, Conflict, Exhausted, Timeout]


@dataclass
class Budget:
    time_ms: int = 5000
    max_candidates: int = 50000
    max_hole_nodes: int = 12
    check_fuel: int = 30_000
    verify_fuel: int = 200_000


@dataclass
class SynthesisTask:
    typed: TypedProgram
    constraints: ConstraintSet
    library: dict[str, Scheme]          # names the exercise allows
    entry: str
    signature: Scheme
    model: Program
    examples: list[GlobalExample]       # full set, for final verification
    check_examples: list[GlobalExample]  # subset for per-candidate checks
    properties: list[tuple[str, Program]]
    base_env: Env
    budget: Budget = field(default_factory=Budget)


# --- recursive-call primitive ----------------------------------------------


def make_rec_prim(model: Program, base_env: Env, cache: dict) -> VPrim:
    def rec_fn(session: Session, args: list[Thunk], origin) -> Value:
        try:
            arg = session.to_ground(session.force(args[0]))
        except HoleInValue as e:
            raise RecursionGuardError("recursive argument depends on a hole") from e
        current = getattr(session, "current_input", None)
        if current is None or not strict_substructure(arg, current):
            raise RecursionGuardError(
                f"recursive call on {arg!r} is not structurally smaller")
        key = _freeze(arg)
        if key not in cache:
            sub = Session(fuel=50_000)
            out = eval_entry(sub, model, base_env, arg)
            cache[key] = sub.to_ground(out)
        session.step(10)
        return ground_to_value(cache[key])

    return VPrim(REC_NAME, 1, rec_fn)


def _freeze(g: Ground):
    if isinstance(g, list):
        return ("l",) + tuple(_freeze(x) for x in g)
    if isinstance(g, tuple):
        return ("t",) + tuple(_freeze(x) for x in g)
    return g


def rec_calls_syntactically_ok(e: Expr, decreasing: set[str]) -> bool:
    """Every use of the recursion name must be applied to a decreasing var."""

    def walk(e: Expr, applied_to: Optional[Expr]) -> bool:
        match e:
            case Var(name) if name == REC_NAME:
                return applied_to is not None and isinstance(applied_to, Var) \
                    and applied_to.name in decreasing
            case App(fn, arg):
                return walk(fn, arg) and walk(arg, None)
            case _:
                return all(walk(k, None) for k in ast.children(e))

    return walk(e, None)


def contains_rec(e: Expr) -> bool:
    if isinstance(e, Var):
        return e.name == REC_NAME
    return any(contains_rec(k) for k in ast.children(e))


# --- term enumeration -------------------------------------------------------


@dataclass(frozen=True)
class _Slot:
    type: Type
    locals: tuple[tuple[str, Type], ...]  # lambda binders introduced above


@dataclass(frozen=True)
class _Partial:
    term: tuple            # nested tuples with ("slot", k) leaves
    slots: tuple           # open slot ids, leftmost first
    slot_info: tuple       # (slot_id, _Slot) pairs, assoc list
    subst_id: int          # index into the stream's substitution table
    g: float
    size: int
    labels: tuple[str, ...]


class TermStream:
    """Cost-ordered stream of closed, type-correct terms for one goal."""

    def __init__(self, goal: Type, env: list[tuple[str, Scheme, str]],
                 cm: CostModel, max_nodes: int, lam_names: list[str]):
        self.env = env
        self.cm = cm
        self.max_nodes = max_nodes
        self.lam_names = lam_names
        self.subst_table: list[Subst] = [{}]
        self.heap: list = []
        self.counter = itertools.count()
        self.results: list[tuple[Expr, float, tuple[str, ...]]] = []
        self.exhausted = False
        root = _Partial(("slot", 0), (0,), ((0, _Slot(goal, ())),), 0, 0.0, 0, ())
        self._push(root)
        self.next_slot_id = 1

    def _push(self, p: _Partial) -> None:
        h = len(p.slots) * self.cm.min_cost
        heapq.heappush(self.heap, (p.g + h, p.size, p.labels, next(self.counter), p))

    def get(self, i: int, deadline: Optional[float] = None) -> Optional[tuple[Expr, float, tuple]]:
        while len(self.results) <= i:
            if self.exhausted:
                return None
            if not self._advance(deadline):
                self.exhausted = True
                return None
        return self.results[i]

    def _advance(self, deadline: Optional[float]) -> bool:
        """Expand until one more complete term lands in results."""
        while self.heap:
            if deadline is not None and time.monotonic() > deadline:
                raise SynthesisDeadline()
            _, _, _, _, p = heapq.heappop(self.heap)
            if not p.slots:
                self.results.append((self._to_expr(p.term), p.g, p.labels))
                return True
            self._expand(p)
        return False

    def _expand(self, p: _Partial) -> None:
        slot_id = p.slots[0]
        info = dict(p.slot_info)[slot_id]
        subst = self.subst_table[p.subst_id]
        goal = hmtypes.apply_subst(subst, info.type)

        # local lambda binders, then environment names, sorted
        for name, t in info.locals:
            self._try_name(p, slot_id, info, goal, name, hmtypes.mono(t), "local")
        for name, scheme, kind in self.env:
            self._try_name(p, slot_id, info, goal, name, scheme, kind)
        self._try_literals(p, slot_id, info, goal)
        self._try_lambda(p, slot_id, info, goal)

    def _try_name(self, p: _Partial, slot_id: int, info: _Slot, goal: Type,
                  name: str, scheme: Scheme, kind: str) -> None:
        base_cost = self.cm.var() if kind == "local" else self.cm.name(name)
        t = scheme.instantiate()
        arg_types: list[Type] = []
        for k in range(0, 8):
            subst = self.subst_table[p.subst_id]
            try:
                s = hmtypes.unify(hmtypes.apply_subst(subst, t),
                                  hmtypes.apply_subst(subst, goal))
            except hmtypes.TypeErr:
                s = None
            if s is not None:
                cost = base_cost + k * self.cm.construct("app")
                size = p.size + 1 + k
                if size + (len(p.slots) - 1 + k) <= self.max_nodes:
                    new_subst = hmtypes.compose(s, subst)
                    self._place(p, slot_id, name, arg_types, cost, size, new_subst,
                                (f"name:{name}",) + ("app",) * k)
            if not isinstance(t, TFun):
                break
            arg_types.append(t.arg)
            t = t.res
        return

    def _place(self, p: _Partial, slot_id: int, name: str, arg_types: list[Type],
               cost: float, size: int, subst: Subst, labels: tuple[str, ...]) -> None:
        info = dict(p.slot_info)[slot_id]
        new_ids = list(range(self.next_slot_id, self.next_slot_id + len(arg_types)))
        self.next_slot_id += len(arg_types)
        term: tuple = ("name", name)
        for sid in new_ids:
            term = ("app", term, ("slot", sid))
        new_term = _fill_slot(p.term, slot_id, term)
        new_slots = tuple(new_ids) + p.slots[1:]
        new_info = tuple((sid, x) for sid, x in p.slot_info if sid != slot_id) + tuple(
            (sid, _Slot(at, info.locals)) for sid, at in zip(new_ids, arg_types))
        self.subst_table.append(subst)
        self._push(_Partial(new_term, new_slots, new_info, len(self.subst_table) - 1,
                            p.g + cost, size, p.labels + labels))

    def _try_literals(self, p: _Partial, slot_id: int, info: _Slot, goal: Type) -> None:
        subst = self.subst_table[p.subst_id]

        def place_leaf(term: tuple, cost: float, label: str, extra_subst: Optional[Subst]) -> None:
            if p.size + 1 + (len(p.slots) - 1) > self.max_nodes:
                return
            sub = subst if extra_subst is None else hmtypes.compose(extra_subst, subst)
            new_term = _fill_slot(p.term, slot_id, term)
            self.subst_table.append(sub)
            self._push(_Partial(new_term, p.slots[1:],
                                tuple(x for x in p.slot_info if x[0] != slot_id),
                                len(self.subst_table) - 1,
                                p.g + cost, p.size + 1, p.labels + (label,)))

        def try_unify(t: Type) -> Optional[Subst]:
            try:
                return hmtypes.unify(goal, t)
            except hmtypes.TypeErr:
                return None

        s = try_unify(INT)
        if s is not None:
            for n in (0, 1, 2, 3):
                place_leaf(("lit_int", n), self.cm.construct("lit:int"), "lit:int", s)
        s = try_unify(BOOL)
        if s is not None:
            for b in (False, True):
                place_leaf(("lit_bool", b), self.cm.construct("lit:bool"), "lit:bool", s)
        item = hmtypes.fresh_tvar()
        s = try_unify(TList(item))
        if s is not None:
            place_leaf(("nil",), self.cm.construct("lit:list"), "lit:list", s)
            # singleton list: one new slot for the element
            if p.size + 2 + len(p.slots) <= self.max_nodes:
                sid = self.next_slot_id
                self.next_slot_id += 1
                info0 = dict(p.slot_info)[slot_id]
                new_term = _fill_slot(p.term, slot_id, ("list1", ("slot", sid)))
                self.subst_table.append(hmtypes.compose(s, subst))
                elem_t = hmtypes.apply_subst(self.subst_table[-1], item)
                self._push(_Partial(new_term, (sid,) + p.slots[1:],
                                    tuple(x for x in p.slot_info if x[0] != slot_id)
                                    + ((sid, _Slot(elem_t, info0.locals)),),
                                    len(self.subst_table) - 1,
                                    p.g + self.cm.construct("lit:list"), p.size + 1,
                                    p.labels + ("lit:list",)))
        if isinstance(goal, TTuple):
            sids = list(range(self.next_slot_id, self.next_slot_id + len(goal.items)))
            self.next_slot_id += len(sids)
            info0 = dict(p.slot_info)[slot_id]
            new_term = _fill_slot(p.term, slot_id,
                                  ("tuple",) + tuple(("slot", sid) for sid in sids))
            if p.size + 1 + len(sids) + (len(p.slots) - 1) <= self.max_nodes:
                self.subst_table.append(subst)
                self._push(_Partial(new_term, tuple(sids) + p.slots[1:],
                                    tuple(x for x in p.slot_info if x[0] != slot_id)
                                    + tuple((sid, _Slot(t, info0.locals))
                                            for sid, t in zip(sids, goal.items)),
                                    len(self.subst_table) - 1,
                                    p.g + self.cm.construct("lit:tuple"), p.size + 1,
                                    p.labels + ("lit:tuple",)))

    def _try_lambda(self, p: _Partial, slot_id: int, info: _Slot, goal: Type) -> None:
        if not isinstance(goal, TFun):
            return
        if p.size + 2 + len(p.slots) > self.max_nodes:
            return
        used = {n for n, _ in info.locals}
        name = next(n for n in self.lam_names if n not in used)
        sid = self.next_slot_id
        self.next_slot_id += 1
        new_term = _fill_slot(p.term, slot_id, ("lam", name, ("slot", sid)))
        self.subst_table.append(self.subst_table[p.subst_id])
        self._push(_Partial(new_term, (sid,) + p.slots[1:],
                            tuple(x for x in p.slot_info if x[0] != slot_id)
                            + ((sid, _Slot(goal.res, info.locals + ((name, goal.arg),))),),
                            len(self.subst_table) - 1,
                            p.g + self.cm.construct("lam"), p.size + 1,
                            p.labels + ("lam",)))

    def _to_expr(self, term: tuple) -> Expr:
        match term[0]:
            case "name":
                return Var(term[1])
            case "app":
                return App(self._to_expr(term[1]), self._to_expr(term[2]))
            case "lam":
                return Lam(PVar(term[1]), self._to_expr(term[2]))
            case "lit_int":
                return IntLit(term[1])
            case "lit_bool":
                return BoolLit(term[1])
            case "nil":
                return ListLit(())
            case "list1":
                return ListLit((self._to_expr(term[1]),))
            case "tuple":
                return TupleLit(tuple(self._to_expr(t) for t in term[1:]))
        raise ValueError(term)


class SynthesisDeadline(Exception):
    pass


def _fill_slot(term: tuple, slot_id: int, replacement: tuple) -> tuple:
    if term[0] == "slot":
        return replacement if term[1] == slot_id else term
    if term[0] in ("name", "lit_int", "lit_bool", "nil"):
        return term
    if term[0] == "lam":
        return ("lam", term[1], _fill_slot(term[2], slot_id, replacement))
    if term[0] == "app":
        return ("app", _fill_slot(term[1], slot_id, replacement),
                _fill_slot(term[2], slot_id, replacement))
    if term[0] in ("list1",):
        return ("list1", _fill_slot(term[1], slot_id, replacement))
    if term[0] == "tuple":
        return ("tuple",) + tuple(_fill_slot(t, slot_id, replacement) for t in term[1:])
    raise ValueError(term)


# --- joint search -----------------------------------------------------------


def fill_program(program: Program, filling: dict[int, Expr], entry: str) -> Program:
    """Substitute fillings for holes, renaming the recursion marker back."""
    out = program
    for hid, expr in filling.items():
        expr = ast.rename_var(expr, REC_NAME, entry)
        site = next((h for h in ast.holes(out) if h.hole_id == hid), None)
        if site is None:
            raise KeyError(f"hole ?{hid} not in program")
        out = ast.replace_at(out, site.path, expr)
    return out


def verify_filling(program: Program, filling: dict[int, Expr],
                   examples: list[GlobalExample],
                   properties: list[tuple[str, Program]],
                   base_env: Env, entry: str,
                   fuel: int = 200_000) -> tuple[bool, list[str]]:
    """Check a filled program against every example and property."""
    from .interp import program_env

    filled = fill_program(program, filling, entry)
    witnesses: list[str] = []
    try:
        for ex in examples:
            session = Session(fuel)
            out = eval_entry(session, filled, base_env, ex.input)
            if session.to_ground(out) != ex.expected:
                from .checker import ground_text
                witnesses.append(
                    f"{entry} {ground_text(ex.input)} == "
                    f"{ground_text(session.to_ground(out))}, expected {ground_text(ex.expected)}")
                return False, witnesses
        env = program_env(filled, base_env)
        for name, prop in properties:
            prop_env = program_env(prop, env)
            for ex in examples:
                session = Session(fuel)
                fn = session.force(prop_env.lookup(prop.entry))
                v = session.apply(fn, Thunk.from_value(ground_to_value(ex.input)))
                from .interp import VBool
                if not isinstance(v, VBool) or not v.b:
                    from .checker import ground_text
                    witnesses.append(f"property {name} fails on {ground_text(ex.input)}")
                    return False, witnesses
    except (EvalError, HoleInValue, RecursionError) as e:
        witnesses.append(f"evaluation failed: {e}")
        return False, witnesses
    return True, witnesses


def _candidate_passes_locals(expr: Expr, locals_: list[LocalExample],
                             rec_prim: VPrim, check_fuel: int) -> bool:
    """Evaluate a candidate against the hole's ground local examples."""
    for ex in locals_:
        if ex.env_ref is None:
            continue
        session = Session(check_fuel)
        session.current_input = ex.source_input
        env = ex.env_ref.child({REC_NAME: Thunk.from_value(rec_prim)})
        try:
            v = session.eval(expr, env, None)
            for a in ex.args:
                v = session.apply(v, Thunk.from_value(ground_to_value(a)))
            if isinstance(v, VIndet):
                continue
            if session.to_ground(v) != ex.expected:
                return False
        except RecursionGuardError:
            return False
        except (EvalError, HoleInValue, RecursionError):
            continue  # inconclusive locally; the global re-check decides
    return True


@dataclass
class _State:
    index: int                       # next hole position to fill
    chosen: tuple                    # (hole_id, Expr, cost) triples
    constraints: ConstraintSet       # re-derived under the chosen prefix
    g: float
    labels: tuple


def synthesize(task: SynthesisTask, cm: CostModel) -> SynthesisOutcome:
    """Fill every hole jointly, cheapest total cost first."""
    conflict = detect_conflict(task.constraints)
    if isinstance(conflict, Conflict):
        return conflict

    # the recursion marker is priced like the entry name itself
    cm = CostModel(costs={**cm.costs, f"name:{REC_NAME}": cm.name(task.entry)},
                   model_cost=cm.model_cost, generic_cost=cm.generic_cost,
                   absent_name_cost=cm.absent_name_cost)

    tp = task.typed
    hole_ids = [h.hole_id for h in ast.holes(tp.program)]
    if not hole_ids:
        ok, _ = verify_filling(tp.program, {}, task.examples, task.properties,
                               task.base_env, task.entry, task.budget.verify_fuel)
        return Success({}, 0.0, 0) if ok else Exhausted(0)

    deadline = time.monotonic() + task.budget.time_ms / 1000.0
    rec_cache: dict = {}
    rec_prim = make_rec_prim(task.model, task.base_env, rec_cache)
    rec_extra = {REC_NAME: Thunk.from_value(rec_prim)}

    streams: dict[int, TermStream] = {}
    lam_pool = [f"v{i}" for i in range(8)]
    for hid in hole_ids:
        info = tp.holes[hid]
        env_entries: list[tuple[str, Scheme, str]] = []
        for name in sorted(info.local_env):
            if name in info.enclosing_defs or name == task.entry:
                continue
            env_entries.append((name, info.local_env[name], "local"))
        for name in sorted(task.library):
            env_entries.append((name, task.library[name], "lib"))
        env_entries.append((REC_NAME, task.signature, "rec"))
        streams[hid] = TermStream(info.type, env_entries, cm,
                                  task.budget.max_hole_nodes, lam_pool)

    candidates = 0
    counter = itertools.count()
    heap: list = []

    def push(state: _State, j: int) -> None:
        item = streams[hole_ids[state.index]].get(j, deadline)
        if item is None:
            return
        _, cost, labels = item
        remaining = len(hole_ids) - state.index - 1
        f = state.g + cost + remaining * cm.min_cost
        heapq.heappush(heap, (f, state.g + cost, labels, next(counter), state, j))

    init = _State(0, (), task.constraints, 0.0, ())
    try:
        push(init, 0)
        while heap:
            if time.monotonic() > deadline:
                return Timeout(candidates)
            if candidates >= task.budget.max_candidates:
                return Timeout(candidates)
            _, _, _, _, state, j = heapq.heappop(heap)
            hid = hole_ids[state.index]
            item = streams[hid].get(j, deadline)
            if item is None:
                continue
            push(state, j + 1)  # sibling: next candidate for this hole
            expr, cost, labels = item
            candidates += 1

            info = tp.holes[hid]
            if contains_rec(expr) and not rec_calls_syntactically_ok(
                    expr, set(info.decreasing)):
                continue
            locals_ = [ex for ex in state.constraints.locals.get(hid, [])]
            if not _candidate_passes_locals(expr, locals_, rec_prim,
                                            task.budget.check_fuel):
                continue

            chosen = state.chosen + ((hid, expr, cost),)
            filling = {h: e for h, e, _ in chosen}
            partial = _fill_some(tp.program, filling)
            outcome = _recheck(partial, task, rec_extra)
            if outcome is None:
                continue
            if state.index + 1 == len(hole_ids):
                if not outcome.empty:
                    continue
                ok, _ = verify_filling(tp.program, filling, task.examples,
                                       task.properties, task.base_env,
                                       task.entry, task.budget.verify_fuel)
                if ok:
                    return Success(
                        {h: ast.rename_var(e, REC_NAME, task.entry) for h, e in filling.items()},
                        state.g + cost, candidates)
                continue
            child = _State(state.index + 1, chosen, outcome, state.g + cost,
                           state.labels + labels)
            push(child, 0)
    except SynthesisDeadline:
        return Timeout(candidates)

    return Exhausted(candidates)


def _fill_some(program: Program, filling: dict[int, Expr]) -> Program:
    out = program
    for hid, expr in filling.items():
        site = next((h for h in ast.holes(out) if h.hole_id == hid), None)
        if site is not None:
            out = ast.replace_at(out, site.path, expr)
    return out


def _recheck(program: Program, task: SynthesisTask,
             rec_extra: dict[str, Thunk]) -> Optional[ConstraintSet]:
    """Re-run example checking under a partial filling; None to reject."""
    try:
        outcome = check_all_program(program, task.check_examples, task.base_env,
                                    task.budget.check_fuel, rec_extra)
    except RecursionGuardError:
        return None
    if isinstance(outcome, (Counterexample, Inconclusive)):
        return None
    return outcome


def check_all_program(program: Program, examples: list[GlobalExample], base: Env,
                      fuel: int, extra: Optional[dict[str, Thunk]] = None) -> CheckOutcome:
    """check_all over a bare program (types are not needed for checking)."""
    return check_all(program, examples, base, fuel, extra)
