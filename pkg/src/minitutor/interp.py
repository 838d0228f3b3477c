"""Call-by-need evaluator that proceeds around holes.

Evaluation of a hole produces an indeterminate value carrying the hole's
environment and whatever eliminations have piled up on it (pending
applications, or an opaque marker once something other than an
application consumed it). Everything else reduces normally, so a partial
program still produces as much of its output as its holes allow.

Data cells remember the path of the expression (or of the referenced
primitive) that built them; failure analysis uses that to point back
into the program.

Thunks live inside one evaluation session; programs themselves are
immutable and can be shared freely between sessions.
"""
from __future__ import annotations

from typing import Any, Callable, Optional, Union

from .lang import ast
from .lang.ast import (
    Alt, App, BoolLit, Case, Expr, Hole, IntLit, Lam, Let, ListLit,
    Pattern, PBool, PCons, PInt, PList, PTuple, PVar, PWild, Program,
    Range, TupleLit, Var,
)

Path = tuple[int, ...]
Ground = Union[int, bool, list, tuple]


class EvalError(Exception):
    pass


class FuelExhausted(EvalError):
    def __init__(self, steps: int):
        self.steps = steps
        super().__init__(f"evaluation ran out of fuel after {steps} steps")


class PrimitiveError(EvalError):
    def __init__(self, message: str, path: Optional[Path] = None):
        self.path = path
        super().__init__(message)


class Thunk:
    __slots__ = ("state", "payload", "env", "path")
    # state: 'expr' | 'fn' | 'busy' | 'done'

    def __init__(self, state: str, payload: Any, env: Optional["Env"] = None,
                 path: Optional[Path] = None):
        self.state = state
        self.payload = payload
        self.env = env
        self.path = path

    @classmethod
    def of(cls, expr: Expr, env: "Env", path: Optional[Path]) -> "Thunk":
        return cls("expr", expr, env, path)

    @classmethod
    def from_value(cls, v: "Value") -> "Thunk":
        return cls("done", v)

    @classmethod
    def deferred(cls, fn: Callable[[], "Value"]) -> "Thunk":
        return cls("fn", fn)


class Env:
    __slots__ = ("frame", "parent", "is_global")

    def __init__(self, frame: dict[str, Thunk], parent: Optional["Env"] = None,
                 is_global: bool = False):
        self.frame = frame
        self.parent = parent
        self.is_global = is_global

    def lookup(self, name: str) -> Optional[Thunk]:
        env: Optional[Env] = self
        while env is not None:
            t = env.frame.get(name)
            if t is not None:
                return t
            env = env.parent
        return None

    def child(self, frame: Optional[dict[str, Thunk]] = None) -> "Env":
        return Env(frame if frame is not None else {}, self)

    def local_names(self) -> list[str]:
        """Names bound above the global frame, innermost shadowing first."""
        seen: set[str] = set()
        out: list[str] = []
        env: Optional[Env] = self
        while env is not None and not env.is_global:
            for name in env.frame:
                if name not in seen:
                    seen.add(name)
                    out.append(name)
            env = env.parent
        return out

    def local_thunks(self) -> dict[str, Thunk]:
        out: dict[str, Thunk] = {}
        env: Optional[Env] = self
        while env is not None and not env.is_global:
            for name, t in env.frame.items():
                out.setdefault(name, t)
            env = env.parent
        return out


# --- values -------------------------------------------------------------

class Value:
    __slots__ = ("origin",)

    def __init__(self, origin: Optional[Path]):
        self.origin = origin


class VInt(Value):
    __slots__ = ("n",)

    def __init__(self, n: int, origin: Optional[Path] = None):
        super().__init__(origin)
        self.n = n

    def __repr__(self) -> str:
        return f"VInt({self.n})"


class VBool(Value):
    __slots__ = ("b",)

    def __init__(self, b: bool, origin: Optional[Path] = None):
        super().__init__(origin)
        self.b = b

    def __repr__(self) -> str:
        return f"VBool({self.b})"


class VNil(Value):
    __slots__ = ()

    def __repr__(self) -> str:
        return "VNil"


class VCons(Value):
    __slots__ = ("head", "tail")

    def __init__(self, head: Thunk, tail: Thunk, origin: Optional[Path] = None):
        super().__init__(origin)
        self.head = head
        self.tail = tail

    def __repr__(self) -> str:
        return "VCons(...)"


class VTuple(Value):
    __slots__ = ("items",)

    def __init__(self, items: tuple[Thunk, ...], origin: Optional[Path] = None):
        super().__init__(origin)
        self.items = items


class VClosure(Value):
    __slots__ = ("param", "body", "env")

    def __init__(self, param: Pattern, body: Expr, env: Env, origin: Optional[Path]):
        super().__init__(origin)
        self.param = param
        self.body = body
        self.env = env


class VPrim(Value):
    __slots__ = ("name", "arity", "fn", "args")

    def __init__(self, name: str, arity: int,
                 fn: Callable[["Session", list[Thunk], Optional[Path]], Value],
                 args: tuple[Thunk, ...] = (), origin: Optional[Path] = None):
        super().__init__(origin)
        self.name = name
        self.arity = arity
        self.fn = fn
        self.args = args

    def with_origin(self, origin: Path) -> "VPrim":
        return VPrim(self.name, self.arity, self.fn, self.args, origin)


PendingItem = tuple[str, Any]  # ("app", Thunk) or ("opaque", reason)


class VIndet(Value):
    """A hole (or something stuck on one) that evaluation flowed around."""

    __slots__ = ("hole_id", "env", "pending")

    def __init__(self, hole_id: int, env: Env, pending: tuple[PendingItem, ...] = ()):
        super().__init__(None)
        self.hole_id = hole_id
        self.env = env
        self.pending = pending

    def push(self, item: PendingItem) -> "VIndet":
        return VIndet(self.hole_id, self.env, self.pending + (item,))

    @property
    def opaque(self) -> bool:
        return any(kind != "app" for kind, _ in self.pending)

    def __repr__(self) -> str:
        return f"VIndet(?{self.hole_id}, pending={len(self.pending)})"


# --- session -------------------------------------------------------------

DEFAULT_FUEL = 100_000


class Session:
    """One evaluation run: a fuel budget plus the thunks it forces."""

    def __init__(self, fuel: int = DEFAULT_FUEL):
        self.fuel = fuel
        self.steps = 0
        self.current_input: Optional[Ground] = None

    def step(self, n: int = 1) -> None:
        self.steps += n
        if self.steps > self.fuel:
            raise FuelExhausted(self.steps)

    def force(self, t: Thunk) -> Value:
        if t.state == "done":
            return t.payload
        if t.state == "busy":
            raise PrimitiveError("circular evaluation", t.path)
        prev = t.state
        t.state = "busy"
        try:
            if prev == "expr":
                v = self.eval(t.payload, t.env, t.path)
            else:  # 'fn'
                v = t.payload()
        except BaseException:
            # thunks outlive a failed session (captured environments are
            # shared between checks); leave them retryable, not poisoned
            t.state = prev
            raise
        t.state = "done"
        t.payload = v
        t.env = None
        return v

    # -- core evaluation ---------------------------------------------------

    def eval(self, e: Expr, env: Env, path: Optional[Path]) -> Value:
        self.step()
        sub = _child_path
        match e:
            case IntLit(v):
                return VInt(v, path)
            case BoolLit(v):
                return VBool(v, path)
            case Hole(hid):
                return VIndet(hid, env)
            case Var(name):
                t = env.lookup(name)
                if t is None:
                    raise PrimitiveError(f"unbound variable {name!r}", path)
                v = self.force(t)
                if isinstance(v, VPrim) and v.origin is None and path is not None:
                    return v.with_origin(path)
                return v
            case Lam():
                return VClosure(e.param, e.body, env, path)
            case App(fn, arg):
                fv = self.eval(fn, env, sub(path, 0))
                return self.apply(fv, Thunk.of(arg, env, sub(path, 1)))
            case ListLit(items):
                acc: Value = VNil(path)
                for i in range(len(items) - 1, -1, -1):
                    acc = VCons(Thunk.of(items[i], env, sub(path, i)),
                                Thunk.from_value(acc), path)
                return acc
            case TupleLit(items):
                return VTuple(tuple(Thunk.of(it, env, sub(path, i))
                                    for i, it in enumerate(items)), path)
            case Range(lo, hi):
                lov = self.eval(lo, env, sub(path, 0))
                if isinstance(lov, VIndet):
                    return lov.push(("opaque", "range"))
                if not isinstance(lov, VInt):
                    raise PrimitiveError("range bound is not an integer", path)
                hiv: Optional[int] = None
                if hi is not None:
                    h = self.eval(hi, env, sub(path, 1))
                    if isinstance(h, VIndet):
                        return h.push(("opaque", "range"))
                    if not isinstance(h, VInt):
                        raise PrimitiveError("range bound is not an integer", path)
                    hiv = h.n
                return self._range_from(lov.n, hiv, path)
            case Case(scrut, alts):
                return self._eval_case(e, scrut, alts, env, path)
            case Let(body, bindings):
                env2 = env.child()
                base = 1
                for i, b in enumerate(bindings):
                    env2.frame[b.name] = Thunk.of(b.expr, env2, sub(path, base + i))
                return self.eval(body, env2, sub(path, 0))
        raise TypeError(e)

    def _range_from(self, n: int, hi: Optional[int], path: Optional[Path]) -> Value:
        if hi is not None and n > hi:
            return VNil(path)
        self.step()
        return VCons(Thunk.from_value(VInt(n, path)),
                     Thunk.deferred(lambda: self._range_from(n + 1, hi, path)),
                     path)

    def _eval_case(self, case_node: Case, scrut: Expr, alts: tuple[Alt, ...],
                   env: Env, path: Optional[Path]) -> Value:
        scrut_thunk = Thunk.of(scrut, env, _child_path(path, 0))
        child_index = 1
        for alt in alts:
            idx = child_index
            # reserve path slots: conds/bodies then where-bindings
            n_slots = sum(2 if g.cond is not None else 1 for g in alt.guards) + len(alt.where)
            child_index += n_slots
            m = self.match(alt.pat, scrut_thunk)
            if m is None:
                continue
            if isinstance(m, VIndet):
                return m.push(("opaque", "case"))
            env2 = env.child(dict(m))
            if alt.where:
                where_base = idx + sum(2 if g.cond is not None else 1 for g in alt.guards)
                for wi, b in enumerate(alt.where):
                    env2.frame[b.name] = Thunk.of(b.expr, env2, _child_path(path, where_base + wi))
            slot = idx
            matched_all_guards = True
            for g in alt.guards:
                if g.cond is None:
                    return self.eval(g.body, env2, _child_path(path, slot))
                cv = self.eval(g.cond, env2, _child_path(path, slot))
                slot += 1
                if isinstance(cv, VIndet):
                    return cv.push(("opaque", "guard"))
                if not isinstance(cv, VBool):
                    raise PrimitiveError("guard is not a boolean", path)
                if cv.b:
                    return self.eval(g.body, env2, _child_path(path, slot))
                slot += 1
                matched_all_guards = False
            _ = matched_all_guards  # all guards failed: fall through to next alt
        raise PrimitiveError("inexhaustive patterns", path)

    def match(self, pat: Pattern, t: Thunk) -> Union[dict[str, Thunk], None, VIndet]:
        """None on mismatch, a VIndet when blocked on a hole, else bindings."""
        match pat:
            case PVar(name):
                return {name: t}
            case PWild():
                return {}
            case PInt(v):
                fv = self.force(t)
                if isinstance(fv, VIndet):
                    return fv
                return {} if isinstance(fv, VInt) and fv.n == v else None
            case PBool(v):
                fv = self.force(t)
                if isinstance(fv, VIndet):
                    return fv
                return {} if isinstance(fv, VBool) and fv.b == v else None
            case PTuple(items):
                fv = self.force(t)
                if isinstance(fv, VIndet):
                    return fv
                if not isinstance(fv, VTuple) or len(fv.items) != len(items):
                    return None
                binds: dict[str, Thunk] = {}
                for p, it in zip(items, fv.items):
                    m = self.match(p, it)
                    if m is None or isinstance(m, VIndet):
                        return m
                    binds.update(m)
                return binds
            case PCons(hp, tp):
                fv = self.force(t)
                if isinstance(fv, VIndet):
                    return fv
                if not isinstance(fv, VCons):
                    return None
                m1 = self.match(hp, fv.head)
                if m1 is None or isinstance(m1, VIndet):
                    return m1
                m2 = self.match(tp, fv.tail)
                if m2 is None or isinstance(m2, VIndet):
                    return m2
                return {**m1, **m2}
            case PList(items):
                binds = {}
                cur = t
                for p in items:
                    fv = self.force(cur)
                    if isinstance(fv, VIndet):
                        return fv
                    if not isinstance(fv, VCons):
                        return None
                    m = self.match(p, fv.head)
                    if m is None or isinstance(m, VIndet):
                        return m
                    binds.update(m)
                    cur = fv.tail
                fv = self.force(cur)
                if isinstance(fv, VIndet):
                    return fv
                return binds if isinstance(fv, VNil) else None
        raise TypeError(pat)

    def apply(self, fv: Value, arg: Thunk) -> Value:
        self.step()
        if isinstance(fv, VClosure):
            m = self.match(fv.param, arg)
            if m is None:
                raise PrimitiveError("pattern match failure in lambda", fv.origin)
            if isinstance(m, VIndet):
                return m.push(("opaque", "match"))
            env2 = fv.env.child(dict(m))
            return self.eval(fv.body, env2, _child_path(fv.origin, 0))
        if isinstance(fv, VPrim):
            args = fv.args + (arg,)
            if len(args) == fv.arity:
                return fv.fn(self, list(args), fv.origin)
            return VPrim(fv.name, fv.arity, fv.fn, args, fv.origin)
        if isinstance(fv, VIndet):
            return fv.push(("app", arg))
        raise PrimitiveError("application of a non-function")

    def apply_many(self, fv: Value, args: list[Thunk]) -> Value:
        for a in args:
            fv = self.apply(fv, a)
        return fv

    # -- deep forcing -------------------------------------------------------

    def deep_force(self, v: Value) -> Value:
        """Force a value's entire structure (leaves may stay indeterminate)."""
        self.step()
        if isinstance(v, VCons):
            head = self.deep_force(self.force(v.head))
            tail = self.deep_force(self.force(v.tail))
            return VCons(Thunk.from_value(head), Thunk.from_value(tail), v.origin)
        if isinstance(v, VTuple):
            items = tuple(Thunk.from_value(self.deep_force(self.force(t))) for t in v.items)
            return VTuple(items, v.origin)
        return v

    def to_ground(self, v: Value) -> Ground:
        """Convert a fully determinate value to plain Python data."""
        self.step()
        match v:
            case VInt():
                return v.n
            case VBool():
                return v.b
            case VNil():
                return []
            case VCons():
                out = [self.to_ground(self.force(v.head))]
                cur = self.force(v.tail)
                while isinstance(cur, VCons):
                    self.step()
                    out.append(self.to_ground(self.force(cur.head)))
                    cur = self.force(cur.tail)
                if isinstance(cur, VIndet):
                    raise HoleInValue(cur)
                if not isinstance(cur, VNil):
                    raise PrimitiveError("improper list")
                return out
            case VTuple():
                return tuple(self.to_ground(self.force(t)) for t in v.items)
            case VIndet():
                raise HoleInValue(v)
        raise PrimitiveError(f"cannot ground a {type(v).__name__}")


class HoleInValue(EvalError):
    def __init__(self, indet: VIndet):
        self.indet = indet
        super().__init__(f"value contains hole ?{indet.hole_id}")


def _child_path(path: Optional[Path], i: int) -> Optional[Path]:
    return None if path is None else path + (i,)


# --- ground <-> value ---------------------------------------------------

def ground_to_value(g: Ground) -> Value:
    if isinstance(g, bool):
        return VBool(g)
    if isinstance(g, int):
        return VInt(g)
    if isinstance(g, list):
        acc: Value = VNil(None)
        for item in reversed(g):
            acc = VCons(Thunk.from_value(ground_to_value(item)), Thunk.from_value(acc))
        return acc
    if isinstance(g, tuple):
        return VTuple(tuple(Thunk.from_value(ground_to_value(i)) for i in g))
    raise TypeError(f"not a ground value: {g!r}")


def ground_to_expr(g: Ground) -> Expr:
    if isinstance(g, bool):
        return BoolLit(g)
    if isinstance(g, int):
        return IntLit(g)
    if isinstance(g, list):
        return ListLit(tuple(ground_to_expr(i) for i in g))
    if isinstance(g, tuple):
        return TupleLit(tuple(ground_to_expr(i) for i in g))
    raise TypeError(f"not a ground value: {g!r}")


def strict_substructure(part: Ground, whole: Ground) -> bool:
    """Is ``part`` a proper subterm of ``whole``?"""

    def subterms(g: Ground):
        if isinstance(g, list):
            for i in range(1, len(g) + 1):
                yield g[i:]
            for item in g:
                yield item
                yield from subterms(item)
        elif isinstance(g, tuple):
            for item in g:
                yield item
                yield from subterms(item)

    return any(part == s for s in subterms(whole))


# --- program environments -------------------------------------------------

def program_env(program: Program, base: Env, extra: Optional[dict[str, Thunk]] = None) -> Env:
    """Environment binding the program's top-level names over ``base``.

    The frame counts as global: top-level names are not 'local variables'
    of any hole.
    """
    env = Env({}, base, is_global=True)
    for i, b in enumerate(program.bindings):
        env.frame[b.name] = Thunk.of(b.expr, env, (i,))
    if extra:
        env.frame.update(extra)
    return env


def eval_entry(session: Session, program: Program, base: Env, arg: Ground,
               extra: Optional[dict[str, Thunk]] = None) -> Value:
    """Apply the program's entry function to a ground argument."""
    env = program_env(program, base, extra)
    entry = env.lookup(program.entry)
    assert entry is not None
    session.current_input = arg
    fv = session.force(entry)
    return session.apply(fv, Thunk.from_value(ground_to_value(arg)))


def live_eval(env: Env, e: Expr, fuel: int = DEFAULT_FUEL) -> Value:
    """Evaluate one expression to a (possibly partial) result."""
    return Session(fuel).eval(e, env, None)


def run_model(program: Program, base: Env, arg: Ground,
              fuel: int = DEFAULT_FUEL) -> Ground:
    """Run a hole-free program on an input, fully forcing the output."""
    session = Session(fuel)
    out = eval_entry(session, program, base, arg)
    return session.to_ground(out)
