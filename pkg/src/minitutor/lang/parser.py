"""Recursive-descent parser for the mini-language.

Works on the layout-processed token stream, so binding blocks arrive
with explicit ``{ ; }``. Multi-equation definitions are folded into a
lambda over the parameters plus a case over those the clauses actually
pattern-match on; parameter positions where every clause binds the same
plain variable keep that variable.

Unnumbered holes are numbered left to right in source order; explicit
``?3`` keeps its number and auto-numbering skips ids already taken.
"""
from __future__ import annotations

from dataclasses import replace as _dc_replace
from typing import Optional

from .. import hmtypes
from . import ast
from .ast import (
    Alt, App, Binding, BoolLit, Case, DuplicateHoleId, Expr, Guard, Hole,
    IntLit, Lam, Let, ListLit, Pattern, PBool, PCons, PInt, PList, PTuple,
    PVar, PWild, Program, Range, TopBinding, TupleLit, Var,
)
from .lexer import SyntaxErr, Token, lex

# (left binding power, right binding power); right-assoc ops bind looser on the left
INFIX = {
    "$": (2, 1),
    "==": (8, 9), "<": (8, 9), "<=": (8, 9),
    ":": (11, 10),
    "+": (12, 13), "-": (12, 13),
    ".": (19, 18),
}
BACKTICK_POWER = (14, 15)
OPERATOR_NAMES = {"$", "==", "<", "<=", ":", "+", "-", "."}

_AUTO = -1  # placeholder id for unnumbered holes


class _Clause:
    __slots__ = ("name", "pats", "guards", "where", "order")

    def __init__(self, name: str, pats: list[Pattern], guards: list[Guard],
                 where: list[Binding], order: int):
        self.name = name
        self.pats = pats
        self.guards = guards
        self.where = where
        self.order = order


class Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.pos = 0

    # -- token plumbing ----------------------------------------------------

    def peek(self) -> Token:
        return self.toks[self.pos]

    def next(self) -> Token:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def at(self, kind: str, text: Optional[str] = None) -> bool:
        t = self.peek()
        return t.kind == kind and (text is None or t.text == text)

    def expect(self, kind: str, text: Optional[str] = None) -> Token:
        t = self.peek()
        if not self.at(kind, text):
            want = text or kind
            raise SyntaxErr(f"unexpected {t.text!r}", t.line, t.col, [want])
        return self.next()

    def fail(self, expected: list[str]) -> SyntaxErr:
        t = self.peek()
        return SyntaxErr(f"unexpected {t.text or 'end of input'!r}", t.line, t.col, expected)

    # -- declarations --------------------------------------------------------

    def parse_program(self) -> Program:
        clauses: list[_Clause] = []
        signatures: dict[str, str] = {}
        order = 0
        while not self.at("eof"):
            while self.at("op", ";"):
                self.next()
            if self.at("eof"):
                break
            self.parse_decl(clauses, signatures, order)
            order += 1
            if not self.at("eof"):
                if self.at("op", ";"):
                    self.next()
                elif not self.at("eof"):
                    raise self.fail([";", "end of input"])
        if not clauses:
            t = self.peek()
            raise SyntaxErr("empty program", t.line, t.col)
        bindings = _group_clauses(clauses, signatures)
        return Program(tuple(bindings), entry=bindings[0].name)

    def parse_decl(self, clauses: list[_Clause], signatures: dict[str, str], order: int) -> None:
        name_tok = self.expect("ident")
        if self.at("op", "::"):
            self.next()
            scheme = self.parse_type_expr()
            if name_tok.text in signatures:
                raise SyntaxErr(f"duplicate signature for {name_tok.text!r}",
                                name_tok.line, name_tok.col)
            signatures[name_tok.text] = hmtypes.show(scheme.instantiate())
            return
        pats: list[Pattern] = []
        while not (self.at("op", "=") or self.at("op", "|")):
            pats.append(self.parse_apat())
        guards, where = self.parse_rhs("=")
        clauses.append(_Clause(name_tok.text, pats, guards, where, order))

    def parse_rhs(self, eq: str) -> tuple[list[Guard], list[Binding]]:
        guards: list[Guard] = []
        if self.at("op", eq):
            self.next()
            guards.append(Guard(None, self.parse_expr()))
        else:
            while self.at("op", "|"):
                self.next()
                cond = self.parse_expr()
                self.expect("op", eq)
                guards.append(Guard(cond, self.parse_expr()))
            if not guards:
                raise self.fail([eq, "|"])
        where = self.parse_where()
        return guards, where

    def parse_where(self) -> list[Binding]:
        if not self.at("kw", "where"):
            return []
        self.next()
        return self.parse_binding_block()

    def parse_binding_block(self) -> list[Binding]:
        self.expect("op", "{")
        clauses: list[_Clause] = []
        signatures: dict[str, str] = {}
        order = 0
        while not self.at("op", "}"):
            while self.at("op", ";"):
                self.next()
            if self.at("op", "}"):
                break
            self.parse_decl(clauses, signatures, order)
            order += 1
            if not self.at("op", "}"):
                self.expect("op", ";")
        self.expect("op", "}")
        tops = _group_clauses(clauses, signatures) if clauses else []
        return [Binding(t.name, t.expr) for t in tops]

    # -- expressions ---------------------------------------------------------

    def parse_expr(self) -> Expr:
        if self.at("op", "\\"):
            return self.parse_lambda()
        if self.at("kw", "case"):
            return self.parse_case()
        if self.at("kw", "let"):
            return self.parse_let()
        return self.parse_opexpr(0)

    def parse_lambda(self) -> Expr:
        self.expect("op", "\\")
        pats = [self.parse_apat()]
        while not self.at("op", "->"):
            pats.append(self.parse_apat())
        self.expect("op", "->")
        body = self.parse_expr()
        for p in reversed(pats):
            body = Lam(p, body)
        return body

    def parse_case(self) -> Expr:
        self.expect("kw", "case")
        scrut = self.parse_expr()
        self.expect("kw", "of")
        self.expect("op", "{")
        alts: list[Alt] = []
        while not self.at("op", "}"):
            while self.at("op", ";"):
                self.next()
            if self.at("op", "}"):
                break
            pat = self.parse_pat()
            guards, where = self.parse_rhs("->")
            alts.append(Alt(pat, tuple(guards), tuple(where)))
            if not self.at("op", "}"):
                self.expect("op", ";")
        self.expect("op", "}")
        if not alts:
            t = self.peek()
            raise SyntaxErr("case with no alternatives", t.line, t.col)
        return Case(scrut, tuple(alts))

    def parse_let(self) -> Expr:
        self.expect("kw", "let")
        bindings = self.parse_binding_block()
        while self.at("op", ";"):  # layout may leave a stray separator
            self.next()
        self.expect("kw", "in")
        body = self.parse_expr()
        return Let(body, tuple(bindings))

    def parse_opexpr(self, min_bp: int) -> Expr:
        lhs = self.parse_app()
        while True:
            t = self.peek()
            if t.kind == "backtick":
                lbp, rbp = BACKTICK_POWER
                if lbp < min_bp:
                    break
                self.next()
                rhs = self.parse_opexpr(rbp)
                lhs = App(App(Var(t.text), lhs), rhs)
                continue
            if t.kind == "op" and t.text in INFIX:
                lbp, rbp = INFIX[t.text]
                if lbp < min_bp:
                    break
                self.next()
                if self.at("op", "\\"):
                    rhs: Expr = self.parse_lambda()
                elif self.at("kw", "case"):
                    rhs = self.parse_case()
                else:
                    rhs = self.parse_opexpr(rbp)
                lhs = App(App(Var(t.text), lhs), rhs)
                continue
            break
        return lhs

    def parse_app(self) -> Expr:
        e = self.parse_atom()
        while self.starts_atom():
            e = App(e, self.parse_atom())
        return e

    def starts_atom(self) -> bool:
        t = self.peek()
        if t.kind in ("int", "ident", "hole"):
            return True
        if t.kind == "kw" and t.text in ("True", "False"):
            return True
        if t.kind == "op" and t.text in ("(", "["):
            return True
        return False

    def parse_atom(self) -> Expr:
        t = self.peek()
        if t.kind == "int":
            self.next()
            return IntLit(t.value)  # type: ignore[arg-type]
        if t.kind == "kw" and t.text in ("True", "False"):
            self.next()
            return BoolLit(t.text == "True")
        if t.kind == "ident":
            self.next()
            return Var(t.text)
        if t.kind == "hole":
            self.next()
            return Hole(t.value if t.value is not None else _AUTO)
        if t.kind == "op" and t.text == "(":
            self.next()
            if self.peek().kind == "op" and self.peek().text in OPERATOR_NAMES:
                op = self.next()
                self.expect("op", ")")
                return Var(op.text)
            first = self.parse_expr()
            items = [first]
            while self.at("op", ","):
                self.next()
                items.append(self.parse_expr())
            self.expect("op", ")")
            return items[0] if len(items) == 1 else TupleLit(tuple(items))
        if t.kind == "op" and t.text == "[":
            self.next()
            if self.at("op", "]"):
                self.next()
                return ListLit(())
            first = self.parse_expr()
            if self.at("op", ".."):
                self.next()
                if self.at("op", "]"):
                    self.next()
                    return Range(first, None)
                hi = self.parse_expr()
                self.expect("op", "]")
                return Range(first, hi)
            items = [first]
            while self.at("op", ","):
                self.next()
                items.append(self.parse_expr())
            self.expect("op", "]")
            return ListLit(tuple(items))
        raise self.fail(["expression"])

    # -- patterns --------------------------------------------------------

    def parse_pat(self) -> Pattern:
        p = self.parse_apat()
        if self.at("op", ":"):
            self.next()
            return PCons(p, self.parse_pat())
        return p

    def parse_apat(self) -> Pattern:
        t = self.peek()
        if t.kind == "ident":
            self.next()
            return PVar(t.text)
        if t.kind == "op" and t.text == "_":
            self.next()
            return PWild()
        if t.kind == "int":
            self.next()
            return PInt(t.value)  # type: ignore[arg-type]
        if t.kind == "kw" and t.text in ("True", "False"):
            self.next()
            return PBool(t.text == "True")
        if t.kind == "op" and t.text == "(":
            self.next()
            items = [self.parse_pat()]
            while self.at("op", ","):
                self.next()
                items.append(self.parse_pat())
            self.expect("op", ")")
            return items[0] if len(items) == 1 else PTuple(tuple(items))
        if t.kind == "op" and t.text == "[":
            self.next()
            if self.at("op", "]"):
                self.next()
                return PList(())
            items = [self.parse_pat()]
            while self.at("op", ","):
                self.next()
                items.append(self.parse_pat())
            self.expect("op", "]")
            return PList(tuple(items))
        raise self.fail(["pattern"])

    # -- types ------------------------------------------------------------

    def parse_type_expr(self) -> hmtypes.Scheme:
        toks: list[str] = []
        depth = 0
        while True:
            t = self.peek()
            if t.kind == "eof":
                break
            if t.kind == "op" and t.text in (";", "}") and depth == 0:
                break
            if t.kind == "op" and t.text in ("(", "["):
                depth += 1
            if t.kind == "op" and t.text in (")", "]"):
                depth -= 1
            toks.append(t.text)
            self.next()
        try:
            return hmtypes.parse_type(" ".join(toks))
        except hmtypes.TypeErr as e:
            t = self.peek()
            raise SyntaxErr(f"bad type signature: {e}", t.line, t.col) from e


# --- clause grouping and folding -------------------------------------------


def _group_clauses(clauses: list[_Clause], signatures: dict[str, str]) -> list[TopBinding]:
    groups: list[list[_Clause]] = []
    for c in clauses:
        if groups and groups[-1][0].name == c.name:
            groups[-1].append(c)
        else:
            groups.append([c])
    seen: set[str] = set()
    out: list[TopBinding] = []
    for group in groups:
        name = group[0].name
        if name in seen:
            raise SyntaxErr(f"non-adjacent equations for {name!r}", 0, 0)
        seen.add(name)
        expr = _fold_clauses(name, group)
        out.append(TopBinding(name, expr, signatures.get(name)))
    for name in signatures:
        if name not in seen:
            raise SyntaxErr(f"signature for {name!r} lacks a definition", 0, 0)
    return out


def _fold_clauses(name: str, group: list[_Clause]) -> Expr:
    arity = len(group[0].pats)
    for c in group:
        if len(c.pats) != arity:
            raise SyntaxErr(f"equations for {name!r} have different arities", 0, 0)
    if arity == 0:
        if len(group) > 1:
            raise SyntaxErr(f"multiple bodies for {name!r}", 0, 0)
        return _clause_body(group[0])

    lifted: list[Optional[str]] = []
    for i in range(arity):
        pats_i = [c.pats[i] for c in group]
        if all(isinstance(p, PVar) for p in pats_i) and len({p.name for p in pats_i}) == 1:  # type: ignore[union-attr]
            lifted.append(pats_i[0].name)  # type: ignore[union-attr]
        else:
            lifted.append(None)
    used = _names_in_group(group)
    params: list[str] = []
    k = 0
    for i in range(arity):
        if lifted[i] is not None:
            params.append(lifted[i])  # type: ignore[arg-type]
        else:
            while f"_a{k}" in used:
                k += 1
            params.append(f"_a{k}")
            k += 1
    matched = [i for i in range(arity) if lifted[i] is None]

    if not matched:
        if len(group) == 1:
            body = _clause_body(group[0])
        else:
            alts = tuple(Alt(PWild(), tuple(c.guards), tuple(c.where)) for c in group)
            body = Case(BoolLit(True), alts)
    else:
        if len(matched) == 1:
            scrut: Expr = Var(params[matched[0]])
        else:
            scrut = TupleLit(tuple(Var(params[i]) for i in matched))
        alts = []
        for c in group:
            if len(matched) == 1:
                pat: Pattern = c.pats[matched[0]]
            else:
                pat = PTuple(tuple(c.pats[i] for i in matched))
            alts.append(Alt(pat, tuple(c.guards), tuple(c.where)))
        body = Case(scrut, tuple(alts))

    for p in reversed(params):
        body = Lam(PVar(p), body)
    return body


def _clause_body(c: _Clause) -> Expr:
    if len(c.guards) == 1 and c.guards[0].cond is None:
        body = c.guards[0].body
        return Let(body, tuple(c.where)) if c.where else body
    return Case(BoolLit(True), (Alt(PWild(), tuple(c.guards), tuple(c.where)),))


def _names_in_group(group: list[_Clause]) -> set[str]:
    names: set[str] = set()
    for c in group:
        for p in c.pats:
            names.update(ast.pattern_vars(p))
        for g in c.guards:
            if g.cond is not None:
                names |= ast.free_vars(g.cond)
            names |= ast.free_vars(g.body)
        for b in c.where:
            names.add(b.name)
            names |= ast.free_vars(b.expr)
    return names


# --- hole numbering ----------------------------------------------------------


def _number_holes(p: Program) -> Program:
    explicit: set[int] = set()
    for _, node in ast.iter_paths(p):
        if isinstance(node, Hole) and node.hole_id != _AUTO:
            if node.hole_id in explicit:
                raise DuplicateHoleId(f"hole ?{node.hole_id} appears twice")
            explicit.add(node.hole_id)
    nxt = 0
    bindings = []

    def renumber(e: Expr) -> Expr:
        nonlocal nxt
        if isinstance(e, Hole) and e.hole_id == _AUTO:
            while nxt in explicit:
                nxt += 1
            h = Hole(nxt)
            nxt += 1
            return h
        out = e
        for i, kid in enumerate(ast.children(e)):
            nk = renumber(kid)
            if nk is not kid:
                out = ast.with_child(out, i, nk)
        return out

    for b in p.bindings:
        bindings.append(_dc_replace(b, expr=renumber(b.expr)))
    return _dc_replace(p, bindings=tuple(bindings))


def parse(source: str) -> Program:
    """Parse a program; the first top-level binding becomes the entry."""
    parser = Parser(lex(source))
    return _number_holes(parser.parse_program())


def parse_expr(source: str) -> Expr:
    """Parse a single expression (used for fillings and tests)."""
    parser = Parser(lex(source))
    e = parser.parse_expr()
    parser.expect("eof")
    prog = _number_holes(Program((TopBinding("_it", e),), "_it"))
    return prog.bindings[0].expr


def parse_type(text: str) -> hmtypes.Scheme:
    return hmtypes.parse_type(text)
