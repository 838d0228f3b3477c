"""Abstract syntax of the mini-language.

Multi-equation definitions are folded into a single expression (lambdas
plus a case over the parameters) when the program is built, so every
later stage (typing, evaluation, synthesis) deals with one expression
shape. The pretty-printer reverses that fold where it can.

Every expression node in a program is addressable by a Path: the index
of its top-level binding followed by child indices. ``node_at``,
``replace_at`` and ``path_of`` are total over valid paths.
"""
from __future__ import annotations

from dataclasses import dataclass, replace as _dc_replace
from typing import Iterator, Optional, Union


Path = tuple[int, ...]


class LangError(Exception):
    """Base class for language-level errors."""


class InvalidPath(LangError):
    pass


class DuplicateHoleId(LangError):
    pass


# --- patterns ---------------------------------------------------------------

@dataclass(frozen=True)
class PVar:
    name: str


@dataclass(frozen=True)
class PWild:
    pass


@dataclass(frozen=True)
class PInt:
    value: int


@dataclass(frozen=True)
class PBool:
    value: bool


@dataclass(frozen=True)
class PTuple:
    items: tuple["Pattern", ...]


@dataclass(frozen=True)
class PList:
    items: tuple["Pattern", ...]


@dataclass(frozen=True)
class PCons:
    head: "Pattern"
    tail: "Pattern"


Pattern = Union[PVar, PWild, PInt, PBool, PTuple, PList, PCons]


def pattern_vars(p: Pattern) -> list[str]:
    """Variables bound by a pattern, in source order."""
    match p:
        case PVar(name):
            return [name]
        case PWild() | PInt() | PBool():
            return []
        case PTuple(items) | PList(items):
            out: list[str] = []
            for item in items:
                out.extend(pattern_vars(item))
            return out
        case PCons(head, tail):
            return pattern_vars(head) + pattern_vars(tail)
    raise TypeError(p)


def sub_pattern_vars(p: Pattern) -> list[str]:
    """Variables bound strictly below the root of a pattern.

    These name proper substructures of whatever the pattern matched,
    which is what makes them safe arguments for recursive calls.
    """
    match p:
        case PVar() | PWild() | PInt() | PBool():
            return []
        case PTuple(items) | PList(items):
            out: list[str] = []
            for item in items:
                out.extend(pattern_vars(item))
            return out
        case PCons(head, tail):
            return pattern_vars(head) + pattern_vars(tail)
    raise TypeError(p)


# --- expressions ------------------------------------------------------------

@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class BoolLit:
    value: bool


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Hole:
    hole_id: int


@dataclass(frozen=True)
class Lam:
    param: Pattern
    body: "Expr"


@dataclass(frozen=True)
class App:
    fn: "Expr"
    arg: "Expr"


@dataclass(frozen=True)
class ListLit:
    items: tuple["Expr", ...]


@dataclass(frozen=True)
class TupleLit:
    items: tuple["Expr", ...]


@dataclass(frozen=True)
class Range:
    lo: "Expr"
    hi: Optional["Expr"]  # None for an open range [lo..]


@dataclass(frozen=True)
class Guard:
    cond: Optional["Expr"]  # None means unconditional
    body: "Expr"


@dataclass(frozen=True)
class Binding:
    name: str
    expr: "Expr"


@dataclass(frozen=True)
class Alt:
    pat: Pattern
    guards: tuple[Guard, ...]
    where: tuple[Binding, ...] = ()


@dataclass(frozen=True)
class Case:
    scrutinee: "Expr"
    alts: tuple[Alt, ...]


@dataclass(frozen=True)
class Let:
    """Recursive local bindings; concrete syntax is a ``where`` clause."""

    body: "Expr"
    bindings: tuple[Binding, ...]


Expr = Union[IntLit, BoolLit, Var, Hole, Lam, App, ListLit, TupleLit, Range, Case, Let]


# --- programs ---------------------------------------------------------------

@dataclass(frozen=True)
class TopBinding:
    name: str
    expr: "Expr"
    signature: Optional[str] = None  # raw signature text, parsed by the type checker


@dataclass(frozen=True)
class Program:
    bindings: tuple[TopBinding, ...]
    entry: str

    def binding(self, name: str) -> TopBinding:
        for b in self.bindings:
            if b.name == name:
                return b
        raise KeyError(name)

    @property
    def entry_binding(self) -> TopBinding:
        return self.binding(self.entry)

    def with_entry(self, name: str) -> "Program":
        self.binding(name)  # existence check
        return _dc_replace(self, entry=name)


# --- child access (defines Path semantics) ----------------------------------

def children(e: Expr) -> tuple[Expr, ...]:
    """Expression children of a node, in source order."""
    match e:
        case IntLit() | BoolLit() | Var() | Hole():
            return ()
        case Lam(_, body):
            return (body,)
        case App(fn, arg):
            return (fn, arg)
        case ListLit(items) | TupleLit(items):
            return items
        case Range(lo, None):
            return (lo,)
        case Range(lo, hi):
            return (lo, hi)  # type: ignore[return-value]
        case Case(scrutinee, alts):
            out = [scrutinee]
            for alt in alts:
                for g in alt.guards:
                    if g.cond is not None:
                        out.append(g.cond)
                    out.append(g.body)
                for b in alt.where:
                    out.append(b.expr)
            return tuple(out)
        case Let(body, bindings):
            return (body,) + tuple(b.expr for b in bindings)
    raise TypeError(e)


def with_child(e: Expr, index: int, new: Expr) -> Expr:
    """Rebuild a node with child ``index`` replaced."""
    match e:
        case Lam() if index == 0:
            return _dc_replace(e, body=new)
        case App() if index in (0, 1):
            return _dc_replace(e, fn=new) if index == 0 else _dc_replace(e, arg=new)
        case ListLit(items) | TupleLit(items) if 0 <= index < len(items):
            items2 = items[:index] + (new,) + items[index + 1 :]
            return _dc_replace(e, items=items2)
        case Range(_, None) if index == 0:
            return _dc_replace(e, lo=new)
        case Range() if index in (0, 1):
            return _dc_replace(e, lo=new) if index == 0 else _dc_replace(e, hi=new)
        case Case(scrutinee, alts):
            if index == 0:
                return _dc_replace(e, scrutinee=new)
            i = 1
            new_alts = []
            done = False
            for alt in alts:
                guards = list(alt.guards)
                wheres = list(alt.where)
                for gi, g in enumerate(guards):
                    if g.cond is not None:
                        if i == index:
                            guards[gi] = _dc_replace(g, cond=new)
                            done = True
                        i += 1
                    if not done and i == index:
                        guards[gi] = _dc_replace(g, body=new)
                        done = True
                    i += 1
                for bi, b in enumerate(wheres):
                    if not done and i == index:
                        wheres[bi] = _dc_replace(b, expr=new)
                        done = True
                    i += 1
                new_alts.append(_dc_replace(alt, guards=tuple(guards), where=tuple(wheres)))
            if not done:
                raise InvalidPath(f"child index {index} out of range")
            return _dc_replace(e, alts=tuple(new_alts))
        case Let(_, bindings):
            if index == 0:
                return _dc_replace(e, body=new)
            bi = index - 1
            if not 0 <= bi < len(bindings):
                raise InvalidPath(f"child index {index} out of range")
            bs = list(bindings)
            bs[bi] = _dc_replace(bs[bi], expr=new)
            return _dc_replace(e, bindings=tuple(bs))
    raise InvalidPath(f"child index {index} out of range for {type(e).__name__}")


# --- path operations --------------------------------------------------------

def node_at(p: Program, path: Path) -> Expr:
    if not path or not 0 <= path[0] < len(p.bindings):
        raise InvalidPath(f"no node at {path!r}")
    node = p.bindings[path[0]].expr
    for idx in path[1:]:
        kids = children(node)
        if not 0 <= idx < len(kids):
            raise InvalidPath(f"no node at {path!r}")
        node = kids[idx]
    return node


def _replace_in_expr(e: Expr, rel: Path, new: Expr) -> Expr:
    if not rel:
        return new
    idx = rel[0]
    kids = children(e)
    if not 0 <= idx < len(kids):
        raise InvalidPath(f"child index {idx} out of range")
    return with_child(e, idx, _replace_in_expr(kids[idx], rel[1:], new))


def replace_at(p: Program, path: Path, e: Expr) -> Program:
    """Replace the subtree at ``path`` with ``e``, keeping hole ids unique.

    Holes inside ``e`` that collide with hole ids elsewhere in the program
    are renumbered to fresh ids (holes of the removed subtree do not count).
    """
    if not path or not 0 <= path[0] < len(p.bindings):
        raise InvalidPath(f"no node at {path!r}")
    old = node_at(p, path)
    outside: set[int] = set()
    for _, h in _iter_holes_program(p):
        outside.add(h.hole_id)
    for h in _iter_holes_expr(old):
        outside.discard(h.hole_id)

    inserted = [h.hole_id for h in _iter_holes_expr(e)]
    renum: dict[int, int] = {}
    nxt = max(outside, default=-1) + 1
    seen: set[int] = set()
    for hid in inserted:
        if hid in outside or hid in seen:
            renum[hid] = nxt
            seen.add(nxt)
            nxt += 1
        else:
            seen.add(hid)
    if renum:
        e = _renumber_holes(e, renum)

    b_idx = path[0]
    binding = p.bindings[b_idx]
    new_expr = _replace_in_expr(binding.expr, path[1:], e)
    bs = list(p.bindings)
    bs[b_idx] = _dc_replace(binding, expr=new_expr)
    return _dc_replace(p, bindings=tuple(bs))


def _renumber_holes(e: Expr, renum: dict[int, int]) -> Expr:
    if isinstance(e, Hole):
        return Hole(renum.get(e.hole_id, e.hole_id)) if e.hole_id in renum else e
    out = e
    for i, kid in enumerate(children(e)):
        new_kid = _renumber_holes(kid, renum)
        if new_kid is not kid:
            out = with_child(out, i, new_kid)
    return out


def iter_paths(p: Program) -> Iterator[tuple[Path, Expr]]:
    """All (path, node) pairs, preorder, in source order."""
    for i, b in enumerate(p.bindings):
        yield from _iter_expr_paths(b.expr, (i,))


def _iter_expr_paths(e: Expr, path: Path) -> Iterator[tuple[Path, Expr]]:
    yield path, e
    for i, kid in enumerate(children(e)):
        yield from _iter_expr_paths(kid, path + (i,))


def path_of(p: Program, node: Expr) -> Path:
    """Path of a node found by identity, falling back to equality."""
    by_eq = None
    for path, n in iter_paths(p):
        if n is node:
            return path
        if by_eq is None and n == node:
            by_eq = path
    if by_eq is not None:
        return by_eq
    raise InvalidPath("node not in program")


def _iter_holes_expr(e: Expr) -> Iterator[Hole]:
    if isinstance(e, Hole):
        yield e
    for kid in children(e):
        yield from _iter_holes_expr(kid)


def _iter_holes_program(p: Program) -> Iterator[tuple[Path, Hole]]:
    for path, node in iter_paths(p):
        if isinstance(node, Hole):
            yield path, node


@dataclass(frozen=True)
class HoleSite:
    hole_id: int
    path: Path
    scope: tuple[str, ...]  # in-scope (non-prelude) variable names


def holes(p: Program) -> list[HoleSite]:
    """Each hole with its path and lexical scope, left to right."""
    top = tuple(b.name for b in p.bindings)
    out: list[HoleSite] = []
    for i, b in enumerate(p.bindings):
        _collect_holes(b.expr, (i,), top, out)
    return out


def _collect_holes(e: Expr, path: Path, scope: tuple[str, ...], out: list[HoleSite]) -> None:
    match e:
        case Hole(hid):
            out.append(HoleSite(hid, path, scope))
        case Lam(param, body):
            _collect_holes(body, path + (0,), scope + tuple(pattern_vars(param)), out)
        case Case(scrutinee, alts):
            _collect_holes(scrutinee, path + (0,), scope, out)
            i = 1
            for alt in alts:
                alt_scope = scope + tuple(pattern_vars(alt.pat))
                inner = alt_scope + tuple(b.name for b in alt.where)
                for g in alt.guards:
                    if g.cond is not None:
                        _collect_holes(g.cond, path + (i,), inner, out)
                        i += 1
                    _collect_holes(g.body, path + (i,), inner, out)
                    i += 1
                for b in alt.where:
                    _collect_holes(b.expr, path + (i,), inner, out)
                    i += 1
        case Let(body, bindings):
            inner = scope + tuple(b.name for b in bindings)
            _collect_holes(body, path + (0,), inner, out)
            for j, b in enumerate(bindings):
                _collect_holes(b.expr, path + (1 + j,), inner, out)
        case _:
            for i, kid in enumerate(children(e)):
                _collect_holes(kid, path + (i,), scope, out)


def hole_ids(p: Program) -> list[int]:
    return [h.hole_id for h in holes(p)]


def fresh_hole_id(p: Program) -> int:
    return max(hole_ids(p), default=-1) + 1


def node_count(p: Program) -> int:
    """Number of expression nodes in the program, holes excluded."""
    n = 0
    for _, node in iter_paths(p):
        if not isinstance(node, Hole):
            n += 1
    return n


def expr_size(e: Expr) -> int:
    return 1 + sum(expr_size(k) for k in children(e))


def free_vars(e: Expr, bound: frozenset[str] = frozenset()) -> set[str]:
    match e:
        case Var(name):
            return set() if name in bound else {name}
        case Lam(param, body):
            return free_vars(body, bound | frozenset(pattern_vars(param)))
        case Case(scrutinee, alts):
            out = free_vars(scrutinee, bound)
            for alt in alts:
                inner = bound | frozenset(pattern_vars(alt.pat)) | frozenset(b.name for b in alt.where)
                for g in alt.guards:
                    if g.cond is not None:
                        out |= free_vars(g.cond, inner)
                    out |= free_vars(g.body, inner)
                for b in alt.where:
                    out |= free_vars(b.expr, inner)
            return out
        case Let(body, bindings):
            inner = bound | frozenset(b.name for b in bindings)
            out = free_vars(body, inner)
            for b in bindings:
                out |= free_vars(b.expr, inner)
            return out
        case _:
            out = set()
            for kid in children(e):
                out |= free_vars(kid, bound)
            return out


def rename_var(e: Expr, old: str, new: str) -> Expr:
    """Replace free occurrences of ``old`` with ``new`` (no capture check)."""
    match e:
        case Var(name) if name == old:
            return Var(new)
        case Lam(param, _) if old in pattern_vars(param):
            return e
        case Case(scrutinee, alts):
            new_scrut = rename_var(scrutinee, old, new)
            new_alts = []
            for alt in alts:
                shadowed = old in pattern_vars(alt.pat) or any(b.name == old for b in alt.where)
                if shadowed:
                    new_alts.append(alt)
                    continue
                gs = tuple(
                    Guard(rename_var(g.cond, old, new) if g.cond is not None else None,
                          rename_var(g.body, old, new))
                    for g in alt.guards
                )
                ws = tuple(Binding(b.name, rename_var(b.expr, old, new)) for b in alt.where)
                new_alts.append(Alt(alt.pat, gs, ws))
            return Case(new_scrut, tuple(new_alts))
        case Let(body, bindings):
            if any(b.name == old for b in bindings):
                return e
            return Let(rename_var(body, old, new),
                       tuple(Binding(b.name, rename_var(b.expr, old, new)) for b in bindings))
        case _:
            out = e
            for i, kid in enumerate(children(e)):
                nk = rename_var(kid, old, new)
                if nk is not kid:
                    out = with_child(out, i, nk)
            return out


# --- alpha equivalence ------------------------------------------------------

def alpha_equal(a: Program | Expr, b: Program | Expr) -> bool:
    if isinstance(a, Program) and isinstance(b, Program):
        if len(a.bindings) != len(b.bindings) or a.entry != b.entry:
            return False
        return all(
            x.name == y.name and _alpha(x.expr, y.expr, {}, {})
            for x, y in zip(a.bindings, b.bindings)
        )
    if isinstance(a, Program) or isinstance(b, Program):
        return False
    return _alpha(a, b, {}, {})


def _alpha_pat(p: Pattern, q: Pattern, env_a: dict, env_b: dict, n: int) -> Optional[int]:
    """Extend rename maps for matching patterns; None if shapes differ."""
    match p, q:
        case PVar(x), PVar(y):
            env_a[x] = n
            env_b[y] = n
            return n + 1
        case PWild(), PWild():
            return n
        case PInt(x), PInt(y):
            return n if x == y else None
        case PBool(x), PBool(y):
            return n if x == y else None
        case (PTuple(xs), PTuple(ys)) | (PList(xs), PList(ys)):
            if len(xs) != len(ys):
                return None
            for x, y in zip(xs, ys):
                r = _alpha_pat(x, y, env_a, env_b, n)
                if r is None:
                    return None
                n = r
            return n
        case PCons(h1, t1), PCons(h2, t2):
            r = _alpha_pat(h1, h2, env_a, env_b, n)
            if r is None:
                return None
            return _alpha_pat(t1, t2, env_a, env_b, r)
    return None


def _alpha(a: Expr, b: Expr, env_a: dict, env_b: dict) -> bool:
    if type(a) is not type(b):
        return False
    match a, b:
        case IntLit(x), IntLit(y):
            return x == y
        case BoolLit(x), BoolLit(y):
            return x == y
        case Hole(x), Hole(y):
            return x == y
        case Var(x), Var(y):
            ra, rb = env_a.get(x, ("free", x)), env_b.get(y, ("free", y))
            return ra == rb
        case Lam(p1, b1), Lam(p2, b2):
            ea, eb = dict(env_a), dict(env_b)
            n = max([v for v in ea.values() if isinstance(v, int)] +
                    [v for v in eb.values() if isinstance(v, int)], default=-1) + 1
            if _alpha_pat(p1, p2, ea, eb, n) is None:
                return False
            return _alpha(b1, b2, ea, eb)
        case Case(s1, alts1), Case(s2, alts2):
            if len(alts1) != len(alts2) or not _alpha(s1, s2, env_a, env_b):
                return False
            for x, y in zip(alts1, alts2):
                ea, eb = dict(env_a), dict(env_b)
                n = max([v for v in ea.values() if isinstance(v, int)] +
                        [v for v in eb.values() if isinstance(v, int)], default=-1) + 1
                n2 = _alpha_pat(x.pat, y.pat, ea, eb, n)
                if n2 is None or len(x.guards) != len(y.guards) or len(x.where) != len(y.where):
                    return False
                for i, (bx, by) in enumerate(zip(x.where, y.where)):
                    if bx.name != by.name:
                        return False
                    ea[bx.name] = n2 + i
                    eb[by.name] = n2 + i
                for gx, gy in zip(x.guards, y.guards):
                    if (gx.cond is None) != (gy.cond is None):
                        return False
                    if gx.cond is not None and not _alpha(gx.cond, gy.cond, ea, eb):
                        return False
                    if not _alpha(gx.body, gy.body, ea, eb):
                        return False
                for bx, by in zip(x.where, y.where):
                    if not _alpha(bx.expr, by.expr, ea, eb):
                        return False
            return True
        case Let(b1, bs1), Let(b2, bs2):
            if len(bs1) != len(bs2):
                return False
            ea, eb = dict(env_a), dict(env_b)
            n = max([v for v in ea.values() if isinstance(v, int)] +
                    [v for v in eb.values() if isinstance(v, int)], default=-1) + 1
            for i, (bx, by) in enumerate(zip(bs1, bs2)):
                if bx.name != by.name:
                    return False
                ea[bx.name] = n + i
                eb[by.name] = n + i
            for bx, by in zip(bs1, bs2):
                if not _alpha(bx.expr, by.expr, ea, eb):
                    return False
            return _alpha(b1, b2, ea, eb)
        case _:
            ka, kb = children(a), children(b)
            if len(ka) != len(kb):
                return False
            if isinstance(a, Range) and (a.hi is None) != (b.hi is None):  # type: ignore[union-attr]
                return False
            return all(_alpha(x, y, env_a, env_b) for x, y in zip(ka, kb))
