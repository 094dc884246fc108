"""Text form of generator polynomials.

Grammar::

    expr   := ['-'] term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := atom ('^' uint)?
    atom   := symbol | rational | '(' expr ')'

Symbols are E1, P, E3, E4, e2, e4, e6 and the imaginary unit I.  Rationals
are written ``a`` or ``a/b``.  A leading minus is only allowed at the start of
an expression (or parenthesized sub-expression).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .coeffs import GQ
from .errors import ExprSyntaxError
from .quasijacobi import SYMBOLS, WEIGHTS, GeneratorPoly

__all__ = ["Num", "Sym", "BinOp", "Neg", "Pow", "parse_expr", "parse_poly", "format_poly",
           "to_poly", "node_weight"]

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^()]))")
_SYMBOL_WEIGHT = dict(zip(SYMBOLS, WEIGHTS))


@dataclass(frozen=True)
class Span:
    start: int
    end: int


@dataclass(frozen=True)
class Num:
    value: Fraction
    span: Span


@dataclass(frozen=True)
class Sym:
    name: str
    span: Span


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object
    span: Span


@dataclass(frozen=True)
class Neg:
    operand: object
    span: Span


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int
    span: Span


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def _line_col(src: str, pos: int) -> tuple[int, int]:
    line = src.count("\n", 0, pos) + 1
    col = pos - (src.rfind("\n", 0, pos) + 1) + 1
    return line, col


def _error(src: str, pos: int, msg: str) -> ExprSyntaxError:
    line, col = _line_col(src, pos)
    return ExprSyntaxError(msg, line, col)


def _tokenize(src: str) -> list[_Tok]:
    toks = []
    pos = 0
    while True:
        while pos < len(src) and src[pos].isspace():
            pos += 1
        if pos >= len(src):
            break
        m = _TOKEN.match(src, pos)
        if not m or m.end() == pos:
            raise _error(src, pos, f"unexpected character {src[pos]!r}")
        kind = m.lastgroup
        start = m.start(kind)
        toks.append(_Tok(kind, m.group(kind), start))
        pos = m.end()
    toks.append(_Tok("end", "", len(src)))
    return toks


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.toks = _tokenize(src)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect_op(self, op: str):
        t = self.peek()
        if t.kind != "op" or t.text != op:
            raise _error(self.src, t.pos, f"expected {op!r}" if t.kind != "end" else
                         f"expected {op!r} before end of input")
        return self.take()

    def expr(self):
        t = self.peek()
        if t.kind == "op" and t.text == "-":
            self.take()
            inner = self.term()
            node = Neg(inner, Span(t.pos, inner.span.end))
        else:
            node = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.take().text
            right = self.term()
            node = BinOp(op, node, right, Span(node.span.start, right.span.end))
        return node

    def term(self):
        node = self.factor()
        while self.peek().kind == "op" and self.peek().text == "*":
            self.take()
            right = self.factor()
            node = BinOp("*", node, right, Span(node.span.start, right.span.end))
        return node

    def factor(self):
        base = self.atom()
        if self.peek().kind == "op" and self.peek().text == "^":
            self.take()
            t = self.peek()
            if t.kind != "num" or "/" in t.text:
                raise _error(self.src, t.pos, "exponent must be a non-negative integer")
            self.take()
            return Pow(base, int(t.text), Span(base.span.start, t.pos + len(t.text)))
        return base

    def atom(self):
        t = self.peek()
        if t.kind == "num":
            self.take()
            num, _, den = t.text.partition("/")
            if den and int(den) == 0:
                raise _error(self.src, t.pos, "zero denominator")
            return Num(Fraction(int(num), int(den or 1)), Span(t.pos, t.pos + len(t.text)))
        if t.kind == "name":
            self.take()
            if t.text not in _SYMBOL_WEIGHT and t.text != "I":
                raise _error(self.src, t.pos, f"unknown symbol {t.text!r}")
            return Sym(t.text, Span(t.pos, t.pos + len(t.text)))
        if t.kind == "op" and t.text == "(":
            self.take()
            inner = self.expr()
            close = self.expect_op(")")
            return _respan(inner, Span(t.pos, close.pos + 1))
        if t.kind == "end":
            raise _error(self.src, t.pos, "unexpected end of input")
        raise _error(self.src, t.pos, f"unexpected {t.text!r}")


def _respan(node, span):
    return type(node)(*[getattr(node, f) for f in node.__dataclass_fields__ if f != "span"], span)


def parse_expr(src: str):
    """Parse to an AST; raises ExprSyntaxError with line and column."""
    if not src or not src.strip():
        raise ExprSyntaxError("empty expression", 1, 1)
    p = _Parser(src)
    node = p.expr()
    t = p.peek()
    if t.kind != "end":
        raise _error(src, t.pos, f"unexpected {t.text!r}")
    return node


def to_poly(node) -> GeneratorPoly:
    if isinstance(node, Num):
        return GeneratorPoly.const(node.value)
    if isinstance(node, Sym):
        if node.name == "I":
            return GeneratorPoly.const(GQ(0, 1))
        return GeneratorPoly.symbol(node.name)
    if isinstance(node, Neg):
        return -to_poly(node.operand)
    if isinstance(node, Pow):
        return to_poly(node.base) ** node.exponent
    a, b = to_poly(node.left), to_poly(node.right)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    return a * b


def node_weight(node) -> int | None:
    """Weight of the subtree, or None when it mixes weights."""
    if isinstance(node, Num):
        return 0
    if isinstance(node, Sym):
        return _SYMBOL_WEIGHT.get(node.name, 0)
    if isinstance(node, Neg):
        return node_weight(node.operand)
    if isinstance(node, Pow):
        w = node_weight(node.base)
        return None if w is None else w * node.exponent
    a, b = node_weight(node.left), node_weight(node.right)
    if a is None or b is None:
        return None
    if node.op == "*":
        return a + b
    return a if a == b else None


def parse_poly(src: str) -> GeneratorPoly:
    return to_poly(parse_expr(src))


def _frac(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _mono(m) -> str:
    parts = []
    for name, e in zip(SYMBOLS, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_poly(f: GeneratorPoly) -> str:
    """Canonical text: terms by descending weight, then descending exponents."""
    if f.is_zero():
        return "0"
    out = []
    for m, c in f.sorted_terms():
        mono = _mono(m)
        if c.im == 0:
            neg = c.re < 0
            a = -c.re if neg else c.re
            if not mono:
                body = _frac(a)
            elif a == 1:
                body = mono
            else:
                body = f"{_frac(a)}*{mono}"
        else:
            neg = False
            if c.re == 0:
                neg = c.im < 0
                b = -c.im if neg else c.im
                coef = "I" if b == 1 else f"{_frac(b)}*I"
            else:
                sign = "-" if c.im < 0 else "+"
                b = abs(c.im)
                im = "I" if b == 1 else f"{_frac(b)}*I"
                re_s = _frac(c.re) if c.re > 0 else f"-{_frac(-c.re)}"
                coef = f"({re_s} {sign} {im})"
            body = f"{coef}*{mono}" if mono else coef
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)
