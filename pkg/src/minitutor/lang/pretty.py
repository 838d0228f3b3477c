"""Pretty-printer for the mini-language.

Prints bindings back in equation style where the expression has the
shape the parser produces for multi-equation definitions (lambdas over a
case on the parameters); anything else is printed literally, with
explicit braces for case blocks so the output always reparses to an
equal tree.
"""
from __future__ import annotations

from typing import Optional

from .ast import (
    Alt, App, Binding, BoolLit, Case, Expr, Guard, Hole, IntLit, Lam, Let,
    ListLit, Pattern, PBool, PCons, PInt, PList, PTuple, PVar, PWild,
    Program, Range, TopBinding, TupleLit, Var, free_vars,
)

# printing precedence: (level, assoc); higher binds tighter
_OP_PREC = {
    "$": (1, "r"),
    "==": (4, "n"), "<": (4, "n"), "<=": (4, "n"),
    ":": (5, "r"),
    "+": (6, "l"), "-": (6, "l"),
    ".": (9, "r"),
}
_APP_PREC = 10
_OPERATORS = set(_OP_PREC)


def pretty(x: Program | Expr) -> str:
    if isinstance(x, Program):
        chunks = []
        for b in x.bindings:
            chunks.append(_print_binding(b.name, b.expr, b.signature, 0))
        return "\n".join(chunks) + "\n"
    return expr_text(x)


def expr_text(e: Expr, prec: int = 0) -> str:
    return _expr(e, prec)


def pattern_text(p: Pattern, atom: bool = False) -> str:
    match p:
        case PVar(name):
            return name
        case PWild():
            return "_"
        case PInt(v):
            return str(v)
        case PBool(v):
            return "True" if v else "False"
        case PTuple(items):
            return "(" + ", ".join(pattern_text(i) for i in items) + ")"
        case PList(items):
            return "[" + ", ".join(pattern_text(i) for i in items) + "]"
        case PCons(h, t):
            s = f"{pattern_text(h, atom=True)}:{pattern_text(t)}"
            return f"({s})" if atom else s
    raise TypeError(p)


def _expr(e: Expr, prec: int) -> str:
    match e:
        case IntLit(v):
            return str(v)
        case BoolLit(v):
            return "True" if v else "False"
        case Var(name):
            return f"({name})" if name in _OPERATORS else name
        case Hole(hid):
            return f"?{hid}"
        case ListLit(items):
            return "[" + ", ".join(_expr(i, 0) for i in items) + "]"
        case TupleLit(items):
            return "(" + ", ".join(_expr(i, 0) for i in items) + ")"
        case Range(lo, None):
            return f"[{_expr(lo, 0)}..]"
        case Range(lo, hi):
            return f"[{_expr(lo, 0)}..{_expr(hi, 0)}]"
        case App(App(Var(op), lhs), rhs) if op in _OP_PREC:
            level, assoc = _OP_PREC[op]
            lp = level if assoc == "l" else level + 1
            rp = level if assoc == "r" else level + 1
            s = f"{_expr(lhs, lp)} {op} {_expr(rhs, rp)}"
            return f"({s})" if prec > level else s
        case App(fn, arg):
            s = f"{_expr(fn, _APP_PREC)} {_expr(arg, _APP_PREC + 1)}"
            return f"({s})" if prec > _APP_PREC else s
        case Lam():
            pats = []
            body: Expr = e
            while isinstance(body, Lam):
                pats.append(pattern_text(body.param, atom=True))
                body = body.body
            s = "\\" + " ".join(pats) + " -> " + _expr(body, 0)
            return f"({s})" if prec > 0 else s
        case Case(scrut, alts):
            parts = []
            for alt in alts:
                parts.append(_alt_inline(alt))
            s = f"case {_expr(scrut, 1)} of {{ " + "; ".join(parts) + " }"
            return f"({s})" if prec > 0 else s
        case Let(body, bindings):
            bs = "; ".join(_binding_inline(b) for b in bindings)
            s = f"let {{ {bs} }} in {_expr(body, 0)}"
            return f"({s})" if prec > 0 else s
    raise TypeError(e)


def _alt_inline(alt: Alt) -> str:
    parts = [pattern_text(alt.pat)]
    parts.append(_guards_inline(alt.guards, "->"))
    if alt.where:
        parts.append("where { " + "; ".join(_binding_inline(b) for b in alt.where) + " }")
    return " ".join(parts)


def _guards_inline(guards: tuple[Guard, ...], arrow: str) -> str:
    if len(guards) == 1 and guards[0].cond is None:
        return f"{arrow} {_expr(guards[0].body, 0)}"
    return " ".join(f"| {_expr(g.cond, 0)} {arrow} {_expr(g.body, 0)}" for g in guards)


def _binding_inline(b: Binding) -> str:
    return _print_binding(b.name, b.expr, None, 0, inline=True)


# --- equation-style binding printing -----------------------------------------


class _Equation:
    __slots__ = ("pats", "guards", "where")

    def __init__(self, pats: list[Pattern], guards: tuple[Guard, ...], where: tuple[Binding, ...]):
        self.pats = pats
        self.guards = guards
        self.where = where


def _equations_of(expr: Expr) -> Optional[list[_Equation]]:
    """Recover equation clauses when the expression has the parser's fold shape."""
    params: list[str] = []
    body = expr
    while isinstance(body, Lam) and isinstance(body.param, PVar):
        params.append(body.param.name)
        body = body.body

    if isinstance(body, Case) and isinstance(body.scrutinee, BoolLit) and body.scrutinee.value:
        alts = body.alts
        if all(isinstance(a.pat, PWild) for a in alts):
            ok = len(alts) > 1 or any(g.cond is not None for g in alts[0].guards)
            if ok:
                pats = [PVar(p) for p in params]
                return [_Equation(list(pats), a.guards, a.where) for a in alts]
        return None

    if isinstance(body, Case) and params:
        scrut = body.scrutinee
        if isinstance(scrut, Var):
            scrut_vars = [scrut.name]
        elif isinstance(scrut, TupleLit) and all(isinstance(i, Var) for i in scrut.items):
            scrut_vars = [i.name for i in scrut.items]  # type: ignore[union-attr]
        else:
            return None
        try:
            positions = [params.index(v) for v in scrut_vars]
        except ValueError:
            return None
        if positions != sorted(set(positions)):
            return None
        for alt in body.alts:
            if len(scrut_vars) > 1 and not (
                isinstance(alt.pat, PTuple) and len(alt.pat.items) == len(scrut_vars)
            ):
                return None
            used: set[str] = set()
            for g in alt.guards:
                if g.cond is not None:
                    used |= free_vars(g.cond)
                used |= free_vars(g.body)
            for b in alt.where:
                used |= free_vars(b.expr)
            if used & set(scrut_vars):
                return None
        # each matched column must not re-lift on reparse
        for col in range(len(scrut_vars)):
            col_pats = [
                alt.pat if len(scrut_vars) == 1 else alt.pat.items[col]  # type: ignore[union-attr]
                for alt in body.alts
            ]
            if all(isinstance(p, PVar) for p in col_pats) and len({p.name for p in col_pats}) == 1:  # type: ignore[union-attr]
                return None
        eqs = []
        for alt in body.alts:
            pats: list[Pattern] = [PVar(p) for p in params]
            if len(scrut_vars) == 1:
                pats[positions[0]] = alt.pat
            else:
                for col, pos in enumerate(positions):
                    pats[pos] = alt.pat.items[col]  # type: ignore[union-attr]
            eqs.append(_Equation(pats, alt.guards, alt.where))
        return eqs

    if isinstance(body, Let):
        return [_Equation([PVar(p) for p in params], (Guard(None, body.body),), body.bindings)]
    if params:
        return [_Equation([PVar(p) for p in params], (Guard(None, body),), ())]
    return None


def _print_binding(name: str, expr: Expr, signature: Optional[str], indent: int,
                   inline: bool = False) -> str:
    pad = " " * indent
    lines: list[str] = []
    if signature and not inline:
        lines.append(f"{pad}{name} :: {signature}")
    eqs = _equations_of(expr)
    if eqs is None:
        text = f"{pad}{name} = {_expr(expr, 0)}"
        if inline:
            return text.strip()
        lines.append(text)
        return "\n".join(lines)
    for eq in eqs:
        head = name
        if eq.pats:
            head += " " + " ".join(pattern_text(p, atom=True) for p in eq.pats)
        if inline:
            body = _guards_inline(eq.guards, "=")
            text = f"{head} {body}"
            if eq.where:
                text += " where { " + "; ".join(_binding_inline(b) for b in eq.where) + " }"
            lines.append(text)
            continue
        if len(eq.guards) == 1 and eq.guards[0].cond is None:
            lines.append(f"{pad}{head} = {_expr(eq.guards[0].body, 0)}")
        else:
            lines.append(f"{pad}{head}")
            for g in eq.guards:
                lines.append(f"{pad}  | {_expr(g.cond, 0)} = {_expr(g.body, 0)}")
        if eq.where:
            lines.append(f"{pad}  where")
            for b in eq.where:
                lines.append(_print_binding(b.name, b.expr, None, indent + 4))
    return "; ".join(lines) if inline else "\n".join(lines)
