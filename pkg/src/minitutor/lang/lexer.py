"""Tokenizer and layout for the mini-language.

Blocks opened by ``where``, ``of`` and ``let`` follow an offside rule:
the column of the first token after the keyword fixes the block, later
lines at that column separate entries and anything left of it closes the
block. Explicit ``{ ; }`` work too and switch layout off for that block.
The layout pass rewrites the token stream so the parser only ever sees
explicit braces and semicolons.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional


class SyntaxErr(Exception):
    def __init__(self, message: str, line: int, col: int, expected: Optional[list[str]] = None):
        self.message = message
        self.line = line
        self.col = col
        self.expected = sorted(expected) if expected else []
        detail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{line}:{col}: {message}{detail}")


@dataclass(frozen=True)
class Token:
    kind: str  # 'int' 'ident' 'op' 'kw' 'hole' 'backtick' 'eof'
    text: str
    line: int
    col: int
    value: Optional[int] = None  # int literal or explicit hole number


KEYWORDS = {"where", "case", "of", "let", "in", "True", "False"}

# Longest first so '<=' wins over '<', '..' over '.', '::' over ':'.
SYMBOLS = [
    "::", "->", "<=", "==", "..", "|", "=", "\\", "(", ")", "[", "]",
    "{", "}", ",", ";", ":", "<", "+", "-", ".", "$", "_",
]

LAYOUT_KEYWORDS = {"where", "of", "let"}


def _ident_start(c: str) -> bool:
    return c.isalpha() or c == "_"


def _ident_char(c: str) -> bool:
    return c.isalnum() or c in ("_", "'")


def tokenize(source: str) -> list[Token]:
    toks: list[Token] = []
    line, col = 1, 1
    i, n = 0, len(source)
    while i < n:
        c = source[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c in (" ", "\t", "\r"):
            i += 1
            col += 1
            continue
        if source.startswith("--", i):
            while i < n and source[i] != "\n":
                i += 1
            continue
        if c == "?":
            j = i + 1
            while j < n and source[j].isdigit():
                j += 1
            text = source[i:j]
            num = int(text[1:]) if j > i + 1 else None
            toks.append(Token("hole", text, line, col, num))
            col += j - i
            i = j
            continue
        if c == "`":
            j = i + 1
            if j >= n or not _ident_start(source[j]):
                raise SyntaxErr("malformed backtick operator", line, col)
            k = j
            while k < n and _ident_char(source[k]):
                k += 1
            if k >= n or source[k] != "`":
                raise SyntaxErr("unterminated backtick operator", line, col)
            toks.append(Token("backtick", source[j:k], line, col))
            col += k + 1 - i
            i = k + 1
            continue
        if c.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            toks.append(Token("int", source[i:j], line, col, int(source[i:j])))
            col += j - i
            i = j
            continue
        if _ident_start(c) and c != "_":
            j = i
            while j < n and _ident_char(source[j]):
                j += 1
            text = source[i:j]
            kind = "kw" if text in KEYWORDS else "ident"
            toks.append(Token(kind, text, line, col))
            col += j - i
            i = j
            continue
        matched = False
        for sym in SYMBOLS:
            if source.startswith(sym, i):
                # '_' alone is a wildcard; '_foo' was handled as an identifier
                if sym == "_" and i + 1 < n and _ident_char(source[i + 1]):
                    j = i
                    while j < n and _ident_char(source[j]):
                        j += 1
                    toks.append(Token("ident", source[i:j], line, col))
                    col += j - i
                    i = j
                else:
                    toks.append(Token("op", sym, line, col))
                    col += len(sym)
                    i += len(sym)
                matched = True
                break
        if not matched:
            raise SyntaxErr(f"unexpected character {c!r}", line, col)
    toks.append(Token("eof", "", line, col))
    return toks


def _virtual(kind_text: str, tok: Token) -> Token:
    return Token("op", kind_text, tok.line, tok.col)


def layout(toks: list[Token]) -> list[Token]:
    """Insert '{', ';' and '}' per the offside rule."""
    out: list[Token] = []
    # Context stack: column of an implicit block, or None for an explicit one.
    ctx: list[Optional[int]] = []
    let_depths: list[int] = []  # ctx depth below each open 'let' block
    i = 0
    n = len(toks)
    pending: Optional[str] = None  # layout keyword awaiting its block
    last_line = toks[0].line if toks and toks[0].kind != "eof" else 0

    if toks and toks[0].kind != "eof":
        ctx.append(toks[0].col)  # implicit top-level block

    while i < n:
        tok = toks[i]
        if tok.kind == "eof":
            if pending is not None:
                out.append(_virtual("{", tok))
                out.append(_virtual("}", tok))
                pending = None
            # the bottom context is the braceless top-level block
            while len(ctx) > 1 and ctx[-1] is not None:
                out.append(_virtual("}", tok))
                ctx.pop()
            out.append(tok)
            break

        if pending is not None:
            opener, pending = pending, None
            if tok.kind == "op" and tok.text == "{":
                if opener == "let":
                    let_depths.append(len(ctx))
                ctx.append(None)
                out.append(tok)
                last_line = tok.line
                i += 1
                continue
            enclosing = next((c for c in reversed(ctx) if c is not None), None)
            if enclosing is not None and tok.col <= enclosing:
                out.append(_virtual("{", tok))
                out.append(_virtual("}", tok))
                # fall through: token starts a new line in the enclosing block
            else:
                if opener == "let":
                    let_depths.append(len(ctx))
                out.append(_virtual("{", tok))
                ctx.append(tok.col)
                out.append(tok)
                last_line = tok.line
                if tok.kind == "kw" and tok.text in LAYOUT_KEYWORDS:
                    pending = tok.text
                i += 1
                continue

        if tok.line > last_line:
            while len(ctx) > 1 and ctx[-1] is not None and tok.col < ctx[-1]:
                out.append(_virtual("}", tok))
                ctx.pop()
            if ctx and ctx[-1] is not None and tok.col <= ctx[-1]:
                out.append(_virtual(";", tok))
            last_line = tok.line

        if tok.kind == "kw" and tok.text == "in":
            # 'in' closes whatever remains of its 'let' block
            if let_depths:
                base = let_depths.pop()
                while len(ctx) > base:
                    if ctx[-1] is not None:
                        out.append(_virtual("}", tok))
                    ctx.pop()
            out.append(tok)
            i += 1
            continue

        if tok.kind == "op" and tok.text == "{":
            ctx.append(None)
            out.append(tok)
        elif tok.kind == "op" and tok.text == "}":
            if not ctx or ctx[-1] is not None:
                raise SyntaxErr("unexpected '}'", tok.line, tok.col)
            ctx.pop()
            out.append(tok)
        elif tok.kind == "kw" and tok.text in LAYOUT_KEYWORDS:
            out.append(tok)
            pending = tok.text
        else:
            out.append(tok)
        i += 1

    return out


def lex(source: str) -> list[Token]:
    return layout(tokenize(source))
