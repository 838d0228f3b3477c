"""Types, schemes and unification for the mini-language.

Types are Int, Bool, lists, tuples and functions over them, plus type
variables. Unification returns an explicit substitution (most general
unifier) rather than mutating; applying the returned substitution twice
equals applying it once.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Union


class TypeErr(Exception):
    pass


class Mismatch(TypeErr):
    def __init__(self, t1: "Type", t2: "Type"):
        self.t1, self.t2 = t1, t2
        super().__init__(f"cannot unify {show(t1)} with {show(t2)}")


class OccursCheck(TypeErr):
    def __init__(self, var: "TVar", ty: "Type"):
        self.var, self.ty = var, ty
        super().__init__(f"occurs check: {show(var)} in {show(ty)}")


@dataclass(frozen=True)
class TInt:
    pass


@dataclass(frozen=True)
class TBool:
    pass


@dataclass(frozen=True)
class TList:
    item: "Type"


@dataclass(frozen=True)
class TTuple:
    items: tuple["Type", ...]


@dataclass(frozen=True)
class TFun:
    arg: "Type"
    res: "Type"


@dataclass(frozen=True)
class TVar:
    tid: int


Type = Union[TInt, TBool, TList, TTuple, TFun, TVar]
Subst = dict[int, Type]

INT = TInt()
BOOL = TBool()

_counter = itertools.count()


def fresh_tvar() -> TVar:
    return TVar(next(_counter))


@dataclass(frozen=True)
class Scheme:
    vars: tuple[int, ...]
    type: Type

    def instantiate(self) -> Type:
        if not self.vars:
            return self.type
        sub = {v: fresh_tvar() for v in self.vars}
        return apply_subst(sub, self.type)


def mono(t: Type) -> Scheme:
    return Scheme((), t)


def generalize(t: Type, env_free: set[int] = frozenset()) -> Scheme:  # type: ignore[assignment]
    vs = tuple(sorted(free_type_vars(t) - set(env_free)))
    return Scheme(vs, t)


def free_type_vars(t: Type) -> set[int]:
    match t:
        case TVar(tid):
            return {tid}
        case TList(item):
            return free_type_vars(item)
        case TTuple(items):
            out: set[int] = set()
            for it in items:
                out |= free_type_vars(it)
            return out
        case TFun(a, r):
            return free_type_vars(a) | free_type_vars(r)
        case _:
            return set()


def apply_subst(sub: Subst, t: Type) -> Type:
    if not sub:
        return t
    match t:
        case TVar(tid):
            r = sub.get(tid)
            if r is None:
                return t
            return apply_subst(sub, r) if r != t else t
        case TList(item):
            return TList(apply_subst(sub, item))
        case TTuple(items):
            return TTuple(tuple(apply_subst(sub, it) for it in items))
        case TFun(a, r):
            return TFun(apply_subst(sub, a), apply_subst(sub, r))
        case _:
            return t


def compose(s2: Subst, s1: Subst) -> Subst:
    """Composition: apply s1 first, then s2."""
    out: Subst = {tid: apply_subst(s2, ty) for tid, ty in s1.items()}
    for tid, ty in s2.items():
        out.setdefault(tid, ty)
    return out


def unify(t1: Type, t2: Type) -> Subst:
    """Most general unifier of t1 and t2, fully resolved."""
    match t1, t2:
        case TVar(a), TVar(b) if a == b:
            return {}
        case TVar(a), _:
            if a in free_type_vars(t2):
                raise OccursCheck(t1, t2)
            return {a: t2}
        case _, TVar(b):
            if b in free_type_vars(t1):
                raise OccursCheck(t2, t1)
            return {b: t1}
        case TInt(), TInt():
            return {}
        case TBool(), TBool():
            return {}
        case TList(a), TList(b):
            return unify(a, b)
        case TTuple(xs), TTuple(ys) if len(xs) == len(ys):
            sub: Subst = {}
            for x, y in zip(xs, ys):
                s = unify(apply_subst(sub, x), apply_subst(sub, y))
                sub = compose(s, sub)
            return sub
        case TFun(a1, r1), TFun(a2, r2):
            s1 = unify(a1, a2)
            s2 = unify(apply_subst(s1, r1), apply_subst(s1, r2))
            return compose(s2, s1)
    raise Mismatch(t1, t2)


def fn_type(*parts: Type) -> Type:
    """fn_type(a, b, c) == a -> b -> c"""
    t = parts[-1]
    for p in reversed(parts[:-1]):
        t = TFun(p, t)
    return t


def uncurry(t: Type) -> tuple[list[Type], Type]:
    args: list[Type] = []
    while isinstance(t, TFun):
        args.append(t.arg)
        t = t.res
    return args, t


def default_tvars_to_int(t: Type) -> Type:
    sub = {tid: INT for tid in free_type_vars(t)}
    return apply_subst(sub, t)


def show(t: Type, names: dict[int, str] | None = None) -> str:
    if names is None:
        names = {}
        for i, tid in enumerate(sorted(free_type_vars(t))):
            names[tid] = _var_name(i)

    def go(t: Type, atom_fun: bool) -> str:
        match t:
            case TInt():
                return "Int"
            case TBool():
                return "Bool"
            case TVar(tid):
                return names.get(tid, f"t{tid}")
            case TList(item):
                return f"[{go(item, False)}]"
            case TTuple(items):
                return "(" + ", ".join(go(it, False) for it in items) + ")"
            case TFun(a, r):
                s = f"{go(a, True)} -> {go(r, False)}"
                return f"({s})" if atom_fun else s
        raise TypeError(t)

    return go(t, False)


def _var_name(i: int) -> str:
    letters = "abcdefghijklmnopqrstuvwxyz"
    return letters[i] if i < 26 else f"{letters[i % 26]}{i // 26}"


# --- signature parsing --------------------------------------------------

def parse_type(text: str) -> Scheme:
    """Parse a type like ``(a -> b -> b) -> b -> [a] -> b``.

    Lowercase names become quantified variables; the result is a scheme
    closed over all of them.
    """
    toks = list(_type_tokens(text))
    names: dict[str, TVar] = {}
    t, rest = _parse_fun(toks, names)
    if rest:
        raise TypeErr(f"trailing tokens in type: {rest!r}")
    return Scheme(tuple(sorted(v.tid for v in names.values())), t)


def _type_tokens(text: str) -> Iterator[str]:
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif text.startswith("->", i):
            yield "->"
            i += 2
        elif c in "()[],":
            yield c
            i += 1
        elif c.isalpha():
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            yield text[i:j]
            i = j
        else:
            raise TypeErr(f"bad character in type: {c!r}")


def _parse_fun(toks: list[str], names: dict[str, TVar]) -> tuple[Type, list[str]]:
    t, toks = _parse_atom(toks, names)
    if toks and toks[0] == "->":
        r, toks = _parse_fun(toks[1:], names)
        return TFun(t, r), toks
    return t, toks


def _parse_atom(toks: list[str], names: dict[str, TVar]) -> tuple[Type, list[str]]:
    if not toks:
        raise TypeErr("unexpected end of type")
    tok, rest = toks[0], toks[1:]
    if tok == "Int":
        return INT, rest
    if tok == "Bool":
        return BOOL, rest
    if tok == "[":
        item, rest = _parse_fun(rest, names)
        if not rest or rest[0] != "]":
            raise TypeErr("expected ']' in type")
        return TList(item), rest[1:]
    if tok == "(":
        items = []
        t, rest = _parse_fun(rest, names)
        items.append(t)
        while rest and rest[0] == ",":
            t, rest = _parse_fun(rest[1:], names)
            items.append(t)
        if not rest or rest[0] != ")":
            raise TypeErr("expected ')' in type")
        rest = rest[1:]
        return (items[0] if len(items) == 1 else TTuple(tuple(items))), rest
    if tok[0].islower():
        if tok not in names:
            names[tok] = fresh_tvar()
        return names[tok], rest
    raise TypeErr(f"unknown type constructor {tok!r}")
