"""Minimal s-expression reader with source positions (``;`` starts a comment)."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ParseError, UnsupportedFeature

_TOKEN = re.compile(r"\s+|;[^\n]*|\(|\)|[^\s();]+")


class Atom(str):
    """A symbol that remembers where it was read."""

    line: int
    column: int

    def __new__(cls, text: str, line: int = 0, column: int = 0):
        obj = super().__new__(cls, text)
        obj.line = line
        obj.column = column
        return obj


@dataclass
class SList:
    items: list = field(default_factory=list)
    line: int = 0
    column: int = 0

    def __iter__(self):
        return iter(self.items)

    def __len__(self):
        return len(self.items)

    def __getitem__(self, i):
        return self.items[i]

    def head(self) -> str | None:
        if self.items and isinstance(self.items[0], Atom):
            return self.items[0].lower()
        return None


def parse_all(text: str) -> list:
    """Read every top-level expression in ``text``."""
    stack: list[SList] = [SList()]
    line, line_start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        tok = m.group()
        col = pos - line_start + 1
        if tok == "(":
            stack.append(SList(line=line, column=col))
        elif tok == ")":
            if len(stack) == 1:
                raise ParseError("unbalanced ')'", line, col)
            done = stack.pop()
            stack[-1].items.append(done)
        elif tok[0].isspace() or tok[0] == ";":
            pass
        else:
            stack[-1].items.append(Atom(tok, line, col))
        nl = tok.count("\n")
        if nl:
            line += nl
            line_start = pos + tok.rindex("\n") + 1
        pos = m.end()
    if len(stack) > 1:
        open_ = stack[-1]
        raise ParseError("unclosed '('", open_.line, open_.column)
    return stack[0].items


def parse_one(text: str) -> SList:
    exprs = parse_all(text)
    if len(exprs) != 1 or not isinstance(exprs[0], SList):
        where = exprs[1] if len(exprs) > 1 else None
        raise ParseError(
            "expected exactly one parenthesised expression",
            getattr(where, "line", None),
            getattr(where, "column", None),
        )
    return exprs[0]


def where(node) -> tuple[int | None, int | None]:
    return getattr(node, "line", None), getattr(node, "column", None)


def expect_list(node, what: str) -> SList:
    if not isinstance(node, SList):
        raise ParseError(f"expected {what}", *where(node))
    return node


def expect_atom(node, what: str) -> Atom:
    if not isinstance(node, Atom):
        raise ParseError(f"expected {what}", *where(node))
    return node


def typed_list(items, default: str = "object") -> list[tuple[Atom, str]]:
    """Split ``a b - t c - u d`` into ``[(a, t), (b, t), (c, u), (d, object)]``."""
    out: list[tuple[Atom, str]] = []
    pending: list[Atom] = []
    i = 0
    items = list(items)
    while i < len(items):
        tok = items[i]
        if isinstance(tok, SList):
            if tok.head() == "either":
                raise UnsupportedFeature("'either' types are not supported", tok.line, tok.column)
            raise ParseError("unexpected list in typed list", tok.line, tok.column)
        if tok == "-":
            if i + 1 >= len(items):
                raise ParseError("missing type after '-'", tok.line, tok.column)
            t = items[i + 1]
            if isinstance(t, SList) and t.head() == "either":
                raise UnsupportedFeature("'either' types are not supported", t.line, t.column)
            t = expect_atom(t, "type name")
            out += [(p, t.lower()) for p in pending]
            pending = []
            i += 2
            continue
        pending.append(tok)
        i += 1
    out += [(p, default) for p in pending]
    return out
