"""Hindley-Milner inference over the core syntax.

Top-level and ``where`` bindings are let-polymorphic; holes get a fresh
type variable each and end up monomorphic, with anything still unsolved
after inference defaulted to Int so the synthesizer searches a closed
space. The entry binding is checked against the exercise signature,
which is also what types recursive calls to it.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import hmtypes
from .hmtypes import (
    BOOL, INT, Mismatch, OccursCheck, Scheme, Subst, TFun, TList, TTuple,
    TVar, Type, apply_subst, compose, fresh_tvar, unify,
)
from .lang import ast
from .lang.ast import (
    Alt, App, BoolLit, Case, Expr, Hole, IntLit, Lam, Let, ListLit,
    Pattern, PBool, PCons, PInt, PList, PTuple, PVar, PWild, Program,
    Range, TupleLit, Var,
)

Path = tuple[int, ...]


class TypeError_(Exception):
    """Type error with the offending path, expected and found types."""

    def __init__(self, path: Optional[Path], expected: Optional[Type],
                 found: Optional[Type], message: Optional[str] = None):
        self.path = path
        self.expected = expected
        self.found = found
        if message is None:
            message = (f"type mismatch: expected {hmtypes.show(expected)}, "
                       f"found {hmtypes.show(found)}")
        super().__init__(message + (f" at {path}" if path is not None else ""))


class UnboundVariable(TypeError_):
    def __init__(self, name: str, path: Optional[Path]):
        self.name = name
        super().__init__(path, None, None, f"unbound variable {name!r}")


@dataclass
class HoleInfo:
    hole_id: int
    type: Type
    path: Path
    local_env: dict[str, Scheme]  # lexical (non-library) bindings in scope
    decreasing: tuple[str, ...]   # vars naming proper substructures of the entry argument
    enclosing_defs: tuple[str, ...] = ()  # bindings whose definition contains this hole


@dataclass
class TypedProgram:
    program: Program
    entry_type: Type
    node_types: dict[Path, Type]
    holes: dict[int, HoleInfo]

    def hole_type(self, hole_id: int) -> Type:
        return self.holes[hole_id].type


class _Infer:
    def __init__(self, library: dict[str, Scheme]):
        self.library = library
        self.subst: Subst = {}
        self.node_types: dict[Path, Type] = {}
        self.holes: dict[int, HoleInfo] = {}
        self.defining: list[str] = []  # bindings currently being inferred

    def resolve(self, t: Type) -> Type:
        return apply_subst(self.subst, t)

    def unify_at(self, t1: Type, t2: Type, path: Optional[Path]) -> None:
        try:
            s = unify(self.resolve(t1), self.resolve(t2))
        except (Mismatch, OccursCheck) as e:
            if isinstance(e, Mismatch):
                raise TypeError_(path, self.resolve(t1), self.resolve(t2)) from e
            raise TypeError_(path, self.resolve(t1), self.resolve(t2),
                             f"infinite type at {path}: {e}") from e
        self.subst = compose(s, self.subst)

    def pattern(self, pat: Pattern, env: dict[str, Scheme]) -> Type:
        """Type a pattern, binding its variables monomorphically."""
        match pat:
            case PVar(name):
                t = fresh_tvar()
                env[name] = hmtypes.mono(t)
                return t
            case PWild():
                return fresh_tvar()
            case PInt():
                return INT
            case PBool():
                return BOOL
            case PTuple(items):
                return TTuple(tuple(self.pattern(p, env) for p in items))
            case PList(items):
                t = fresh_tvar()
                for p in items:
                    self.unify_at(t, self.pattern(p, env), None)
                return TList(t)
            case PCons(h, t_):
                th = self.pattern(h, env)
                tt = self.pattern(t_, env)
                self.unify_at(tt, TList(th), None)
                return TList(th)
        raise TypeError(pat)

    def infer(self, e: Expr, env: dict[str, Scheme], path: Path,
              decreasing: frozenset[str]) -> Type:
        t = self._infer(e, env, path, decreasing)
        self.node_types[path] = t
        return t

    def _infer(self, e: Expr, env: dict[str, Scheme], path: Path,
               decreasing: frozenset[str]) -> Type:
        match e:
            case IntLit():
                return INT
            case BoolLit():
                return BOOL
            case Var(name):
                scheme = env.get(name) or self.library.get(name)
                if scheme is None:
                    raise UnboundVariable(name, path)
                return scheme.instantiate()
            case Hole(hid):
                t = fresh_tvar()
                local = {k: v for k, v in env.items()}
                self.holes[hid] = HoleInfo(hid, t, path, local, tuple(sorted(decreasing)),
                                           tuple(self.defining))
                return t
            case Lam(param, body):
                env2 = dict(env)
                tp = self.pattern(param, env2)
                tb = self.infer(body, env2, path + (0,), decreasing - set(ast.pattern_vars(param)))
                return TFun(tp, tb)
            case App(fn, arg):
                tf = self.infer(fn, env, path + (0,), decreasing)
                ta = self.infer(arg, env, path + (1,), decreasing)
                tr = fresh_tvar()
                self.unify_at(tf, TFun(ta, tr), path)
                return self.resolve(tr)
            case ListLit(items):
                t = fresh_tvar()
                for i, item in enumerate(items):
                    ti = self.infer(item, env, path + (i,), decreasing)
                    self.unify_at(t, ti, path + (i,))
                return TList(self.resolve(t))
            case TupleLit(items):
                return TTuple(tuple(self.infer(item, env, path + (i,), decreasing)
                                    for i, item in enumerate(items)))
            case Range(lo, hi):
                self.unify_at(self.infer(lo, env, path + (0,), decreasing), INT, path + (0,))
                if hi is not None:
                    self.unify_at(self.infer(hi, env, path + (1,), decreasing), INT, path + (1,))
                return TList(INT)
            case Case(scrut, alts):
                ts = self.infer(scrut, env, path + (0,), decreasing)
                result = fresh_tvar()
                slot = 1
                for alt in alts:
                    base = slot
                    where_base = base + sum(2 if g.cond is not None else 1
                                            for g in alt.guards)
                    env2 = dict(env)
                    tp = self.pattern(alt.pat, env2)
                    self.unify_at(ts, tp, path + (0,))
                    dec_here = set(decreasing)
                    if isinstance(scrut, Var):
                        if scrut.name in decreasing:
                            dec_here |= set(ast.pattern_vars(alt.pat))
                        elif scrut.name in self._entry_params:
                            dec_here |= set(ast.sub_pattern_vars(alt.pat))
                    dec_here -= {b.name for b in alt.where}
                    if alt.where:
                        env2 = self._bind_group(
                            [(b.name, b.expr, path + (where_base + i,))
                             for i, b in enumerate(alt.where)],
                            env2, frozenset(dec_here))
                    s = base
                    for g in alt.guards:
                        if g.cond is not None:
                            tc = self.infer(g.cond, env2, path + (s,), frozenset(dec_here))
                            self.unify_at(tc, BOOL, path + (s,))
                            s += 1
                        tb = self.infer(g.body, env2, path + (s,), frozenset(dec_here))
                        self.unify_at(result, tb, path + (s,))
                        s += 1
                    slot = where_base + len(alt.where)
                return self.resolve(result)
            case Let(body, bindings):
                env2 = self._bind_group(
                    [(b.name, b.expr, path + (1 + i,)) for i, b in enumerate(bindings)],
                    env, decreasing - {b.name for b in bindings})
                return self.infer(body, env2, path + (0,),
                                  decreasing - {b.name for b in bindings})
        raise TypeError(e)

    _entry_params: tuple[str, ...] = ()

    def _bind_group(self, items: list[tuple[str, Expr, Path]],
                    env: dict[str, Scheme], decreasing: frozenset[str]) -> dict[str, Scheme]:
        """Infer a recursive binding group with let-generalization.

        Type variables reachable from a hole never generalize: a hole has
        one type for the whole program, so its uses must keep constraining
        it through the binding that contains it.
        """
        env2 = dict(env)
        assumed: dict[str, TVar] = {}
        for name, _, _ in items:
            tv = fresh_tvar()
            assumed[name] = tv
            env2[name] = hmtypes.mono(tv)
        names = [name for name, _, _ in items]
        self.defining.extend(names)
        try:
            for name, expr, p in items:
                t = self.infer(expr, env2, p, decreasing)
                self.unify_at(assumed[name], t, p)
        finally:
            del self.defining[len(self.defining) - len(names):]
        outer_free: set[int] = set()
        for scheme in env.values():
            outer_free |= hmtypes.free_type_vars(self.resolve(scheme.type)) - set(scheme.vars)
        outer_free |= self._hole_frontier()
        for name, _, _ in items:
            t = self.resolve(assumed[name])
            env2[name] = hmtypes.generalize(t, outer_free)
        return env2

    def _hole_frontier(self) -> set[int]:
        out: set[int] = set()
        for info in self.holes.values():
            out |= hmtypes.free_type_vars(self.resolve(info.type))
            for s in info.local_env.values():
                out |= hmtypes.free_type_vars(self.resolve(s.type)) - set(s.vars)
        return out


def infer(program: Program, library: dict[str, Scheme],
          signature: Optional[Scheme] = None) -> TypedProgram:
    """Type the whole program; the entry binding is checked against ``signature``."""
    inf = _Infer(library)
    env: dict[str, Scheme] = {}

    entry_type: Optional[Type] = signature.instantiate() if signature is not None else None

    for i, b in enumerate(program.bindings):
        own_sig: Optional[Type] = None
        if b.name == program.entry and entry_type is not None:
            own_sig = entry_type
        elif b.signature:
            own_sig = hmtypes.parse_type(b.signature).instantiate()

        if own_sig is not None:
            # monomorphic recursion at the declared type
            env_b = dict(env)
            env_b[b.name] = hmtypes.mono(own_sig)
            if b.name == program.entry:
                inf._entry_params = _entry_param_names(b.expr)
            inf.defining.append(b.name)
            try:
                t = inf.infer(b.expr, env_b, (i,), frozenset())
            finally:
                inf.defining.pop()
            inf.unify_at(t, own_sig, (i,))
            env[b.name] = hmtypes.mono(inf.resolve(own_sig))
        else:
            env = inf._bind_group([(b.name, b.expr, (i,))], env, frozenset())
        inf._entry_params = ()

    if entry_type is None:
        entry_type = env[program.entry].instantiate()

    # freeze: default leftover variables in hole types to Int
    holes: dict[int, HoleInfo] = {}
    for hid, info in inf.holes.items():
        t = hmtypes.default_tvars_to_int(inf.resolve(info.type))
        local = {name: _freeze_scheme(inf, s) for name, s in info.local_env.items()}
        holes[hid] = HoleInfo(hid, t, info.path, local, info.decreasing, info.enclosing_defs)
    node_types = {p: inf.resolve(t) for p, t in inf.node_types.items()}
    return TypedProgram(program, inf.resolve(entry_type), node_types, holes)


def _freeze_scheme(inf: _Infer, s: Scheme) -> Scheme:
    t = inf.resolve(s.type)
    return Scheme(tuple(v for v in s.vars if v in hmtypes.free_type_vars(t)), t)


def _entry_param_names(e: Expr) -> tuple[str, ...]:
    names = []
    while isinstance(e, Lam):
        if isinstance(e.param, PVar):
            names.append(e.param.name)
        e = e.body
    return tuple(names)
