"""Text <-> LaurentPoly.

Grammar::

    expr   := term (('+' | '-') term)*      (a leading '-' or '+' is allowed)
    term   := [integer] ['*'] factor ('*'? factor)*  |  integer
    factor := 'u' index ['^' signed-integer]

Whitespace is insignificant.  The dimension is the largest variable index
unless a larger ``declared_dim`` is given.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator

from .errors import ParseError
from .laurent import LaurentPoly

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<var>u)|(?P<op>[-+*^]))")


@dataclass(frozen=True)
class PolySource:
    text: str
    declared_dim: int | None = None

    def __post_init__(self):
        if not self.text or not self.text.strip():
            raise ParseError("empty polynomial text", 0, self.text)
        if self.declared_dim is not None and self.declared_dim < 1:
            raise ValueError("declared_dim must be positive")


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.toks: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m:
                bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
                raise ParseError(f"unexpected character {text[bad]!r}", bad, text)
            kind = m.lastgroup
            start = m.start(kind)
            self.toks.append((kind, m.group(kind), start))
            pos = m.end()
        self.i = 0

    def peek(self) -> tuple[str, str, int] | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", len(self.text), self.text)
        self.i += 1
        return tok

    def at(self, kind: str, value: str | None = None) -> bool:
        tok = self.peek()
        return tok is not None and tok[0] == kind and (value is None or tok[1] == value)


def _parse_factor(lx: _Lexer) -> tuple[int, int]:
    _, _, pos = lx.next()  # 'u'
    kind, val, ipos = lx.next()
    if kind != "int":
        raise ParseError("expected variable index after 'u'", ipos, lx.text)
    # 'u' and its index must be adjacent
    if ipos != pos + 1:
        raise ParseError("whitespace between 'u' and its index", pos + 1, lx.text)
    idx = int(val)
    if idx < 1:
        raise ParseError("variable index must be >= 1", ipos, lx.text)
    exp = 1
    if lx.at("op", "^"):
        lx.next()
        sign = 1
        if lx.at("op", "-") or lx.at("op", "+"):
            sign = -1 if lx.next()[1] == "-" else 1
        kind, val, epos = lx.next()
        if kind != "int":
            raise ParseError("expected integer exponent", epos, lx.text)
        exp = sign * int(val)
    return idx, exp


def _parse_term(lx: _Lexer) -> tuple[int, dict[int, int]]:
    coeff = 1
    exps: dict[int, int] = {}
    tok = lx.peek()
    if tok is None:
        raise ParseError("expected a term", len(lx.text), lx.text)
    if tok[0] == "int":
        coeff = int(lx.next()[1])
        if lx.at("op", "*"):
            lx.next()
            if not lx.at("var"):
                t = lx.peek()
                raise ParseError("expected variable after '*'", t[2] if t else len(lx.text), lx.text)
    elif tok[0] != "var":
        raise ParseError(f"unexpected {tok[1]!r}", tok[2], lx.text)
    while lx.at("var"):
        idx, e = _parse_factor(lx)
        exps[idx] = exps.get(idx, 0) + e
        if lx.at("op", "*"):
            lx.next()
            if not lx.at("var"):
                t = lx.peek()
                raise ParseError("expected variable after '*'", t[2] if t else len(lx.text), lx.text)
    return coeff, exps


def _iter_terms(lx: _Lexer) -> Iterator[tuple[int, dict[int, int]]]:
    sign = 1
    if lx.at("op", "-") or lx.at("op", "+"):
        sign = -1 if lx.next()[1] == "-" else 1
    c, e = _parse_term(lx)
    yield sign * c, e
    while lx.peek() is not None:
        kind, val, pos = lx.next()
        if kind != "op" or val not in "+-":
            raise ParseError(f"expected '+' or '-', got {val!r}", pos, lx.text)
        c, e = _parse_term(lx)
        yield (-c if val == "-" else c), e


def parse(src: PolySource | str, declared_dim: int | None = None) -> LaurentPoly:
    if isinstance(src, str):
        src = PolySource(src, declared_dim)
    lx = _Lexer(src.text)
    raw = list(_iter_terms(lx))
    max_idx = max((i for _, e in raw for i in e), default=1)
    dim = max_idx
    if src.declared_dim is not None:
        if src.declared_dim < max_idx:
            raise ParseError(
                f"declared dimension {src.declared_dim} is smaller than max index {max_idx}",
                0,
                src.text,
            )
        dim = src.declared_dim
    acc: dict[tuple[int, ...], int] = {}
    for c, e in raw:
        m = tuple(e.get(i + 1, 0) for i in range(dim))
        acc[m] = acc.get(m, 0) + c
    return LaurentPoly(dim, acc)


def _format_monomial(m: tuple[int, ...]) -> str:
    parts = []
    for i, e in enumerate(m):
        if e == 1:
            parts.append(f"u{i + 1}")
        elif e:
            parts.append(f"u{i + 1}^{e}")
    return "*".join(parts)


def format_poly(f: LaurentPoly) -> str:
    """Canonical text: terms by total degree, then u1 before u2 before ...

    ``parse(format_poly(f)) == f`` for every f.
    """
    if not f:
        return "0"
    out = []
    ordered = sorted(f.terms, key=lambda t: (sum(t[0]), tuple(-e for e in t[0])))
    for k, (m, c) in enumerate(ordered):
        mono = _format_monomial(m)
        a = abs(c)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if k == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append(("- " if c < 0 else "+ ") + body)
    return " ".join(out)


def read_batch(lines) -> Iterator[tuple[int, str]]:
    """Yield (line_number, text) for non-blank, non-comment lines."""
    for no, line in enumerate(lines, 1):
        text = line.split("#", 1)[0].strip()
        if text:
            yield no, text
