"""Concrete and abstract syntax: parser, printer, paths, holes."""
from .ast import (  # noqa: F401
    Alt, App, Binding, BoolLit, Case, DuplicateHoleId, Expr, Guard, Hole,
    HoleSite, IntLit, InvalidPath, Lam, LangError, Let, ListLit, Path,
    Pattern, PBool, PCons, PInt, PList, PTuple, PVar, PWild, Program, Range,
    TopBinding, TupleLit, Var, alpha_equal, children, expr_size, free_vars,
    fresh_hole_id, hole_ids, holes, iter_paths, node_at, node_count,
    path_of, pattern_vars, rename_var, replace_at, sub_pattern_vars,
    with_child,
)
from .lexer import SyntaxErr  # noqa: F401
from .parser import parse, parse_expr, parse_type  # noqa: F401
from .pretty import expr_text, pattern_text, pretty  # noqa: F401
