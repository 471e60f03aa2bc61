"""Recursive-descent parser for polynomial and map literals.

Grammar::

    map     := '[' expr (':' expr)+ ']'
    expr    := ['+'|'-'] term (('+'|'-') term)*
    term    := power (('*'|'/') power)*
    power   := atom ['^' ['-'] INT]
    atom    := NUM | NUM 'i' | 'i' | VAR | 'O' '(' INT ['^' INT] ')' | '(' expr ')'

``VAR`` is ``x`` followed by an index.  Division and negative exponents
need a constant operand.  The printed forms of all four coefficient
domains parse back to the same value.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from cremona.birmap import MapTuple
from cremona.errors import ArityMismatch, MixedDegrees, NonHomogeneous, ParseError, UnknownVariable
from cremona.padicnum import PadicNum
from cremona.poly import QQ, ComplexFloat, HomogPoly, Padic, RealFloat, domain_from_tag

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)(?P<imag>i(?![\w]))?
  | (?P<var>x\d+)
  | (?P<unit>i(?![\w]))
  | (?P<bigo>O(?=\s*\())
  | (?P<op>[-+*/^()\[\]:])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        if m.group("num") is not None:
            out.append(Token("imag" if m.group("imag") else "num", m.group("num"), pos))
        elif m.lastgroup != "ws":
            out.append(Token(m.lastgroup, m.group(0), pos))
        pos = m.end()
    out.append(Token("end", "", len(text)))
    return out


# sparse polynomials {exponent tuple: coefficient} during parsing


class _Parser:
    def __init__(self, text: str, nvars: int, domain):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.nvars = nvars
        self.dom = domain

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if self.tok.text != text:
            found = self.tok.text or "end of input"
            raise ParseError(f"expected {text!r}, found {found!r}", self.tok.pos, self.text)
        return self.advance()

    def fail(self, msg: str, pos=None):
        raise ParseError(msg, self.tok.pos if pos is None else pos, self.text)

    # sparse arithmetic
    def const(self, c) -> dict:
        c = self.dom.convert(c)
        return {} if self._zero(c) else {(0,) * self.nvars: c}

    def _zero(self, c) -> bool:
        if isinstance(self.dom, Padic):
            return c.is_exact_zero()
        return c == 0

    def _clean(self, d: dict) -> dict:
        return {e: c for e, c in d.items() if not self._zero(c)}

    def add(self, a: dict, b: dict, sign=1) -> dict:
        out = dict(a)
        for e, c in b.items():
            c = c if sign > 0 else -c
            out[e] = out[e] + c if e in out else c
        return self._clean(out)

    def mul(self, a: dict, b: dict) -> dict:
        out: dict = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = out[e] + ca * cb if e in out else ca * cb
        return self._clean(out)

    def as_const(self, d: dict, pos: int):
        if not d:
            return self.dom.zero()
        if len(d) != 1 or any(next(iter(d))):
            self.fail("a constant is required here", pos)
        return next(iter(d.values()))

    # grammar
    def expr(self) -> dict:
        sign = 1
        if self.tok.text in "+-" and self.tok.kind == "op":
            sign = -1 if self.advance().text == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = self.add({}, acc, -1)
        while self.tok.kind == "op" and self.tok.text in ("+", "-"):
            op = self.advance().text
            acc = self.add(acc, self.term(), 1 if op == "+" else -1)
        return acc

    def term(self) -> dict:
        acc = self.power()
        while self.tok.kind == "op" and self.tok.text in ("*", "/"):
            op = self.advance()
            rhs_pos = self.tok.pos
            rhs = self.power()
            if op.text == "*":
                acc = self.mul(acc, rhs)
            else:
                c = self.as_const(rhs, rhs_pos)
                if self._zero(c):
                    self.fail("division by zero", rhs_pos)
                acc = self._clean({e: v / c for e, v in acc.items()})
        return acc

    def _int(self) -> int:
        t = self.tok
        if t.kind != "num" or not t.text.isdigit():
            self.fail("expected an integer exponent")
        self.advance()
        return int(t.text)

    def power(self) -> dict:
        base_pos = self.tok.pos
        base = self.atom()
        if not (self.tok.kind == "op" and self.tok.text == "^"):
            return base
        self.advance()
        neg = False
        if self.tok.text == "-":
            self.advance()
            neg = True
        k = self._int()
        if neg:
            c = self.as_const(base, base_pos)
            if self._zero(c):
                self.fail("zero to a negative power", base_pos)
            return self.const(self.dom.one() / c**k)
        out = {(0,) * self.nvars: self.dom.one()}
        for _ in range(k):
            out = self.mul(out, base)
        return out

    def atom(self) -> dict:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return self.const(self._number(t))
        if t.kind in ("imag", "unit"):
            if not isinstance(self.dom, ComplexFloat):
                self.fail("imaginary unit outside the CC field")
            self.advance()
            return self.const(complex(0, float(t.text)) if t.kind == "imag" else 1j)
        if t.kind == "var":
            idx = int(t.text[1:])
            if idx >= self.nvars:
                raise UnknownVariable(f"variable {t.text} with only {self.nvars} variables", t.pos, self.text)
            self.advance()
            e = [0] * self.nvars
            e[idx] = 1
            return {tuple(e): self.dom.one()}
        if t.kind == "bigo":
            return self._big_oh()
        if t.text == "(":
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        found = t.text or "end of input"
        self.fail(f"unexpected {found!r}")

    def _number(self, t: Token):
        if isinstance(self.dom, (RealFloat, ComplexFloat)):
            return float(t.text)
        return Fraction(t.text)

    def _big_oh(self) -> dict:
        pos = self.tok.pos
        if not isinstance(self.dom, Padic):
            self.fail("O(p^k) outside a p-adic field")
        self.advance()
        self.expect("(")
        p = self._int()
        k = 1
        if self.tok.text == "^":
            self.advance()
            k = self._int()
        self.expect(")")
        if p != self.dom.p:
            self.fail(f"O-term in prime {p}, field prime is {self.dom.p}", pos)
        return {(0,) * self.nvars: PadicNum.big_oh(p, self.dom.N, k)}


def _degree_of(d: dict, text: str, pos: int):
    degs = {sum(e) for e in d}
    if len(degs) > 1:
        raise NonHomogeneous(f"terms of degrees {sorted(degs)}", pos, text)
    return degs.pop() if degs else None


def _resolve_domain(field):
    if field is None:
        return QQ
    if isinstance(field, str):
        return domain_from_tag(field)
    return field


def parse_poly(text: str, nvars: int, field="QQ") -> HomogPoly:
    """A single homogeneous polynomial in ``x0 .. x{nvars-1}``."""
    dom = _resolve_domain(field)
    ps = _Parser(text, nvars, dom)
    d = ps.expr()
    if ps.tok.kind != "end":
        ps.fail(f"trailing input {ps.tok.text!r}")
    deg = _degree_of(d, text, 0)
    return HomogPoly(nvars, 0 if deg is None else deg, d, dom)


@dataclass(frozen=True)
class MapLiteral:
    text: str
    tuple: MapTuple
    field: str

    def __str__(self) -> str:
        return format_map(self.tuple)


def _count_components(text: str) -> int:
    depth = 0
    count = 1
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == ":" and depth == 1:
            count += 1
    return count


def parse_map(text: str, field="QQ", nvars: int | None = None) -> MapLiteral:
    """``[e0 : ... : en]`` with each ``ei`` homogeneous of one shared degree.

    The number of components fixes the variable count; ``nvars`` is an
    optional expectation checked against it.
    """
    dom = _resolve_domain(field)
    n = _count_components(text)
    if nvars is not None and nvars != n:
        raise ArityMismatch(f"expected {nvars} components, found {n}")
    ps = _Parser(text, n, dom)
    ps.expect("[")
    comps = []
    while True:
        start = ps.tok.pos
        d = ps.expr()
        comps.append((d, _degree_of(d, text, start), start))
        if ps.tok.text == "]":
            ps.advance()
            break
        ps.expect(":")
    if ps.tok.kind != "end":
        ps.fail(f"trailing input {ps.tok.text!r}")
    if len(comps) < 2:
        raise ParseError("a map literal needs at least two components", 0, text)
    degs = {deg for _, deg, _ in comps if deg is not None}
    if len(degs) > 1:
        raise MixedDegrees(f"components have degrees {sorted(degs)}")
    if not degs:
        raise ParseError("every component is zero", 0, text)
    deg = degs.pop()
    polys = [HomogPoly(n, deg, d, dom) for d, _, _ in comps]
    return MapLiteral(text, MapTuple(polys), dom.tag)


def format_map(t) -> str:
    """Canonical literal text; ``parse_map`` inverts it."""
    t = t.tuple if hasattr(t, "tuple") and not isinstance(t, MapTuple) else t
    return str(t)


def field_tag(dom) -> str:
    return dom.tag


__all__ = ["Token", "tokenize", "parse_poly", "parse_map", "MapLiteral", "format_map", "field_tag"]
