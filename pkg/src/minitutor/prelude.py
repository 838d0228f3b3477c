"""Built-in library: typing schemes and primitive implementations.

Primitives are lazy exactly where the usual list functions are lazy
(cons cells defer their recursion), so open ranges work under ``take``,
``zip`` and friends. A primitive that needs a value but meets a hole
returns that hole's indeterminate marked opaque, since the pending
computation is no longer a plain application chain.
"""
from __future__ import annotations

from typing import Optional

from . import hmtypes
from .hmtypes import Scheme
from .interp import (
    Env, Path, Session, Thunk, Value, VBool, VCons, VIndet, VInt, VNil,
    VPrim, VTuple, PrimitiveError,
)

SCHEME_TEXTS: dict[str, str] = {
    ":": "a -> [a] -> [a]",
    "<": "Int -> Int -> Bool",
    "<=": "Int -> Int -> Bool",
    "==": "a -> a -> Bool",
    "+": "Int -> Int -> Int",
    "-": "Int -> Int -> Int",
    ".": "(b -> c) -> (a -> b) -> a -> c",
    "$": "(a -> b) -> a -> b",
    "foldr": "(a -> b -> b) -> b -> [a] -> b",
    "map": "(a -> b) -> [a] -> [b]",
    "filter": "(a -> Bool) -> [a] -> [a]",
    "zip": "[a] -> [b] -> [(a, b)]",
    "take": "Int -> [a] -> [a]",
    "drop": "Int -> [a] -> [a]",
    "length": "[a] -> Int",
    "null": "[a] -> Bool",
    "head": "[a] -> a",
    "tail": "[a] -> [a]",
    "reverse": "[a] -> [a]",
    "elem": "Int -> [Int] -> Bool",
    "insert": "Int -> [Int] -> [Int]",
    "permutes": "[Int] -> [Int] -> Bool",
    "nondescending": "[Int] -> Bool",
    "not": "Bool -> Bool",
    "fst": "(a, b) -> a",
    "snd": "(a, b) -> b",
    "min": "Int -> Int -> Int",
    "max": "Int -> Int -> Int",
    "otherwise": "Bool",
}

OPERATOR_NAMES = {":", "<", "<=", "==", "+", "-", ".", "$"}

# Names every program may use without being on an exercise allow-list.
ALWAYS_ALLOWED = OPERATOR_NAMES | {"otherwise"}

_schemes: Optional[dict[str, Scheme]] = None


def schemes() -> dict[str, Scheme]:
    global _schemes
    if _schemes is None:
        _schemes = {name: hmtypes.parse_type(text) for name, text in SCHEME_TEXTS.items()}
    return _schemes


# --- helpers -----------------------------------------------------------------


def _opaque(v: VIndet, tag: str) -> VIndet:
    return v.push(("opaque", tag))


def _int(s: Session, t: Thunk, tag: str):
    v = s.force(t)
    if isinstance(v, VIndet):
        return _opaque(v, tag)
    if not isinstance(v, VInt):
        raise PrimitiveError(f"{tag}: expected an integer")
    return v


def _bool(s: Session, t: Thunk, tag: str):
    v = s.force(t)
    if isinstance(v, VIndet):
        return _opaque(v, tag)
    if not isinstance(v, VBool):
        raise PrimitiveError(f"{tag}: expected a boolean")
    return v


def _spine(s: Session, t: Thunk, tag: str):
    """Force a list to WHNF: VNil, VCons, or an opaque indeterminate."""
    v = s.force(t)
    if isinstance(v, VIndet):
        return _opaque(v, tag)
    if not isinstance(v, (VNil, VCons)):
        raise PrimitiveError(f"{tag}: expected a list")
    return v


def _ground_ints(s: Session, t: Thunk, tag: str):
    """Fully force a list of ints; a hole anywhere makes it opaque."""
    out: list[int] = []
    cur = t
    while True:
        v = _spine(s, cur, tag)
        if isinstance(v, VIndet):
            return v
        if isinstance(v, VNil):
            return out
        h = _int(s, v.head, tag)
        if isinstance(h, VIndet):
            return h
        out.append(h.n)
        cur = v.tail


# --- primitive bodies ---------------------------------------------------------


def _p_cons(s: Session, args: list[Thunk], origin: Optional[Path]) -> Value:
    return VCons(args[0], args[1], origin)


def _arith(op):
    def fn(s: Session, args: list[Thunk], origin: Optional[Path]) -> Value:
        a = _int(s, args[0], "arithmetic")
        if isinstance(a, VIndet):
            return a
        b = _int(s, args[1], "arithmetic")
        if isinstance(b, VIndet):
            return b
        return VInt(op(a.n, b.n), origin)
    return fn


def _cmp(op):
    def fn(s: Session, args: list[Thunk], origin: Optional[Path]) -> Value:
        a = _int(s, args[0], "comparison")
        if isinstance(a, VIndet):
            return a
        b = _int(s, args[1], "comparison")
        if isinstance(b, VIndet):
            return b
        return VBool(op(a.n, b.n), origin)
    return fn


def _p_eq(s: Session, args: list[Thunk], origin: Optional[Path]) -> Value:
    result = _struct_eq(s, args[0], args[1])
    if isinstance(result, VIndet):
        return result
    return VBool(result, origin)


def _struct_eq(s: Session, t1: Thunk, t2: Thunk):
    a, b = s.force(t1), s.force(t2)
    if isinstance(a, VIndet):
        return _opaque(a, "==")
    if isinstance(b, VIndet):
        return _opaque(b, "==")
    if isinstance(a, VInt) and isinstance(b, VInt):
        return a.n == b.n
    if isinstance(a, VBool) and isinstance(b, VBool):
        return a.b == b.b
    if isinstance(a, VNil) and isinstance(b, VNil):
        return True
    if isinstance(a, VCons) and isinstance(b, VCons):
        h = _struct_eq(s, a.head, b.head)
        if h is False or isinstance(h, VIndet):
            return h
        return _struct_eq(s, a.tail, b.tail)
    if isinstance(a, (VNil, VCons)) and isinstance(b, (VNil, VCons)):
        return False
    if isinstance(a, VTuple) and isinstance(b, VTuple) and len(a.items) == len(b.items):
        for x, y in zip(a.items, b.items):
            r = _struct_eq(s, x, y)
            if r is False or isinstance(r, VIndet):
                return r
        return True
    raise PrimitiveError("(==) cannot compare these values (functions are not comparable)")


def _p_compose(s: Session, args: list[Thunk], origin: Optional[Path]) -> Value:
    f, g, x = args
    fv = s.force(f)
    if isinstance(fv, VIndet):
        return _opaque(fv, "compose")
    inner = Thunk.deferred(lambda: _apply_thunk(s, g, x))
    return s.apply(fv, inner)


def _apply_thunk(s: Session, f: Thunk, x: Thunk) -> Value:
    fv = s.force(f)
    if isinstance(fv, VIndet):
        return fv.push(("app", x))
    return s.apply(fv, x)


def _p_dollar(s: Session, args: list[Thunk], origin: Optional[Path]) -> Value:
    return _apply_thunk(s, args[0], args[1])


def _p_foldr(s: Session, args: list[Thunk], origin: Optional[Path]) -> Value:
    f, z, xs = args
    v = _spine(s, xs, "foldr")
    if isinstance(v, VIndet):
        return v
    if isinstance(v, VNil):
        return s.force(z)
    rest = Thunk.deferred(lambda: _p_foldr(s, [f, z, v.tail], origin))
    fv = s.force(f)
    if isinstance(fv, VIndet):
        return fv.push(("app", v.head)).push(("app", rest))
    return s.apply(s.apply(fv, v.head), rest)


def _p_map(s: Session, args: list[Thunk], origin: Optional[Path]) -> Value:
    f, xs = args
    v = _spine(s, xs, "map")
    if isinstance(v, (VIndet, VNil)):
        return VNil(origin) if isinstance(v, VNil) else v
    head = Thunk.deferred(lambda: _apply_thunk(s, f, v.head))
    tail = Thunk.deferred(lambda: _p_map(s, [f, v.tail], origin))
    return VCons(head, tail, origin)


def _p_filter(s: Session, args: list[Thunk], origin: Optional[Path]) -> Value:
    p, xs = args
    cur = xs
    while True:
        v = _spine(s, cur, "filter")
        if isinstance(v, (VIndet, VNil)):
            return VNil(origin) if isinstance(v, VNil) else v
        keep = _apply_thunk(s, p, v.head)
        if isinstance(keep, VIndet):
            return _opaque(keep, "filter")
        if not isinstance(keep, VBool):
            raise PrimitiveError("filter: predicate returned a non-boolean")
        if keep.b:
            tail = Thunk.deferred(lambda t=v.tail: _p_filter(s, [p, t], origin))
            return VCons(v.head, tail, origin)
        s.step()
        cur = v.tail


def _p_zip(s: Session, args: list[Thunk], origin: Optional[Path]) -> Value:
    xs, ys = args
    vx = _spine(s, xs, "zip")
    if isinstance(vx, VIndet):
        return vx
    if isinstance(vx, VNil):
        return VNil(origin)
    vy = _spine(s, ys, "zip")
    if isinstance(vy, VIndet):
        return vy
    if isinstance(vy, VNil):
        return VNil(origin)
    pair = VTuple((vx.head, vy.head), origin)
    tail = Thunk.deferred(lambda: _p_zip(s, [vx.tail, vy.tail], origin))
    return VCons(Thunk.from_value(pair), tail, origin)


def _p_take(s: Session, args: list[Thunk], origin: Optional[Path]) -> Value:
    n, xs = args
    nv = _int(s, n, "take")
    if isinstance(nv, VIndet):
        return nv
    if nv.n <= 0:
        return VNil(origin)
    v = _spine(s, xs, "take")
    if isinstance(v, (VIndet, VNil)):
        return VNil(origin) if isinstance(v, VNil) else v
    tail = Thunk.deferred(lambda: _p_take(s, [Thunk.from_value(VInt(nv.n - 1)), v.tail], origin))
    return VCons(v.head, tail, origin)


def _p_drop(s: Session, args: list[Thunk], origin: Optional[Path]) -> Value:
    n, xs = args
    nv = _int(s, n, "drop")
    if isinstance(nv, VIndet):
        return nv
    cur = xs
    for _ in range(nv.n):
        v = _spine(s, cur, "drop")
        if isinstance(v, VIndet):
            return v
        if isinstance(v, VNil):
            return VNil(origin)
        s.step()
        cur = v.tail
    return s.force(cur)


def _p_length(s: Session, args: list[Thunk], origin: Optional[Path]) -> Value:
    n = 0
    cur = args[0]
    while True:
        v = _spine(s, cur, "length")
        if isinstance(v, VIndet):
            return v
        if isinstance(v, VNil):
            return VInt(n, origin)
        s.step()
        n += 1
        cur = v.tail


def _p_null(s: Session, args: list[Thunk], origin: Optional[Path]) -> Value:
    v = _spine(s, args[0], "null")
    if isinstance(v, VIndet):
        return v
    return VBool(isinstance(v, VNil), origin)


def _p_head(s: Session, args: list[Thunk], origin: Optional[Path]) -> Value:
    v = _spine(s, args[0], "head")
    if isinstance(v, VIndet):
        return v
    if isinstance(v, VNil):
        raise PrimitiveError("head of an empty list", origin)
    return s.force(v.head)


def _p_tail(s: Session, args: list[Thunk], origin: Optional[Path]) -> Value:
    v = _spine(s, args[0], "tail")
    if isinstance(v, VIndet):
        return v
    if isinstance(v, VNil):
        raise PrimitiveError("tail of an empty list", origin)
    return s.force(v.tail)


def _p_reverse(s: Session, args: list[Thunk], origin: Optional[Path]) -> Value:
    acc: Value = VNil(origin)
    cur = args[0]
    while True:
        v = _spine(s, cur, "reverse")
        if isinstance(v, VIndet):
            return v
        if isinstance(v, VNil):
            return acc
        s.step()
        acc = VCons(v.head, Thunk.from_value(acc), origin)
        cur = v.tail


def _p_elem(s: Session, args: list[Thunk], origin: Optional[Path]) -> Value:
    x = _int(s, args[0], "elem")
    if isinstance(x, VIndet):
        return x
    xs = _ground_ints(s, args[1], "elem")
    if isinstance(xs, VIndet):
        return xs
    return VBool(x.n in xs, origin)


def _p_insert(s: Session, args: list[Thunk], origin: Optional[Path]) -> Value:
    x, xs = args
    xv = _int(s, x, "insert")
    if isinstance(xv, VIndet):
        return xv
    v = _spine(s, xs, "insert")
    if isinstance(v, VIndet):
        return v
    if isinstance(v, VNil):
        return VCons(Thunk.from_value(xv), Thunk.from_value(VNil(origin)), origin)
    y = _int(s, v.head, "insert")
    if isinstance(y, VIndet):
        return y
    if xv.n < y.n:
        return VCons(Thunk.from_value(xv), Thunk.from_value(v), origin)
    tail = Thunk.deferred(lambda: _p_insert(s, [x, v.tail], origin))
    return VCons(v.head, tail, origin)


def _p_permutes(s: Session, args: list[Thunk], origin: Optional[Path]) -> Value:
    xs = _ground_ints(s, args[0], "permutes")
    if isinstance(xs, VIndet):
        return xs
    ys = _ground_ints(s, args[1], "permutes")
    if isinstance(ys, VIndet):
        return ys
    return VBool(sorted(xs) == sorted(ys), origin)


def _p_nondescending(s: Session, args: list[Thunk], origin: Optional[Path]) -> Value:
    xs = _ground_ints(s, args[0], "nondescending")
    if isinstance(xs, VIndet):
        return xs
    return VBool(all(a <= b for a, b in zip(xs, xs[1:])), origin)


def _p_not(s: Session, args: list[Thunk], origin: Optional[Path]) -> Value:
    v = _bool(s, args[0], "not")
    if isinstance(v, VIndet):
        return v
    return VBool(not v.b, origin)


def _proj(index: int):
    def fn(s: Session, args: list[Thunk], origin: Optional[Path]) -> Value:
        v = s.force(args[0])
        if isinstance(v, VIndet):
            return _opaque(v, "projection")
        if not isinstance(v, VTuple) or len(v.items) != 2:
            raise PrimitiveError("projection from a non-pair")
        return s.force(v.items[index])
    return fn


_PRIMS: dict[str, tuple[int, object]] = {
    ":": (2, _p_cons),
    "<": (2, _cmp(lambda a, b: a < b)),
    "<=": (2, _cmp(lambda a, b: a <= b)),
    "==": (2, _p_eq),
    "+": (2, _arith(lambda a, b: a + b)),
    "-": (2, _arith(lambda a, b: a - b)),
    ".": (3, _p_compose),
    "$": (2, _p_dollar),
    "foldr": (3, _p_foldr),
    "map": (2, _p_map),
    "filter": (2, _p_filter),
    "zip": (2, _p_zip),
    "take": (2, _p_take),
    "drop": (2, _p_drop),
    "length": (1, _p_length),
    "null": (1, _p_null),
    "head": (1, _p_head),
    "tail": (1, _p_tail),
    "reverse": (1, _p_reverse),
    "elem": (2, _p_elem),
    "insert": (2, _p_insert),
    "permutes": (2, _p_permutes),
    "nondescending": (1, _p_nondescending),
    "not": (1, _p_not),
    "fst": (1, _proj(0)),
    "snd": (1, _proj(1)),
    "min": (2, _arith(min)),
    "max": (2, _arith(max)),
}


def global_env() -> Env:
    """Fresh global environment with every built-in bound."""
    frame: dict[str, Thunk] = {}
    for name, (arity, fn) in _PRIMS.items():
        frame[name] = Thunk.from_value(VPrim(name, arity, fn))  # type: ignore[arg-type]
    frame["otherwise"] = Thunk.from_value(VBool(True))
    return Env(frame, None, is_global=True)


def function_names() -> list[str]:
    """Non-operator library names an exercise may allow."""
    return sorted(set(SCHEME_TEXTS) - ALWAYS_ALLOWED)
