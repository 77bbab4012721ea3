"""Recursive-descent parser for the expression grammar.

::

    expr     := term (('+'|'-') term)*
    term     := factor (('*'|'/') factor)*
    factor   := '-' factor | atom ('^' exponent)?
    atom     := number | 'i' | ident | ident '(' ident (',' ident)* ')'
              | 'D' '[' head (',' ident (',' integer)?)+ ']'
              | 'sqrt' '(' expr ')' | '(' expr ')'
    head     := ident | ident '(' ident (',' ident)* ')'
    exponent := ['-'] integer ('^' exponent)? | '(' ['-'] integer '/' '2' ')'

``D[f,E,2]`` is the second partial of ``f`` in its ``E`` slot; functions
named without a slot list get the default slots ``(p_x,p_y,p_z,E)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from ..errors import ParseError
from .canon import simplify
from .nodes import (
    DEFAULT_SLOTS,
    HALF,
    RESERVED,
    Add,
    Const,
    Expr,
    Func,
    I,
    Mul,
    Partial,
    Pow,
    Symbol,
)


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?)|(?P<ident>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*/^()\[\],]))"
)


@dataclass(frozen=True)
class Token:
    kind: str  # "num" | "ident" | "op" | "eof"
    text: str
    span: SourceSpan


def tokenize(text: str):
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(
                f"unexpected character {text[pos]!r}", SourceSpan(pos, pos + 1), text
            )
        kind = m.lastgroup
        tokens.append(Token(kind, m.group(kind), SourceSpan(m.start(kind), m.end(kind))))
        pos = m.end()
    tokens.append(Token("eof", "", SourceSpan(len(text), len(text))))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0
        self.functions = {}

    @property
    def tok(self):
        return self.tokens[self.pos]

    def error(self, expected, tok=None):
        tok = tok or self.tok
        found = tok.text or "end of input"
        raise ParseError(f"expected {expected}, found {found!r}", tok.span, self.text)

    def accept(self, text):
        if self.tok.kind == "op" and self.tok.text == text:
            self.pos += 1
            return True
        return False

    def expect(self, text):
        if not self.accept(text):
            self.error(repr(text))

    def ident(self):
        tok = self.tok
        if tok.kind != "ident":
            self.error("identifier")
        self.pos += 1
        return tok

    def integer(self, signed=True):
        neg = signed and self.accept("-")
        tok = self.tok
        if tok.kind != "num" or "." in tok.text:
            self.error("integer")
        self.pos += 1
        return -int(tok.text) if neg else int(tok.text)

    # grammar ------------------------------------------------------------

    def parse(self):
        e = self.expr()
        if self.tok.kind != "eof":
            self.error("operator or end of input")
        return e

    def expr(self):
        terms = [self.term()]
        while True:
            if self.accept("+"):
                terms.append(self.term())
            elif self.accept("-"):
                terms.append(Mul((Const(-1), self.term())))
            else:
                break
        return terms[0] if len(terms) == 1 else Add(tuple(terms))

    def term(self):
        factors = [self.factor()]
        while True:
            if self.accept("*"):
                factors.append(self.factor())
            elif self.accept("/"):
                factors.append(Pow(self.factor(), Fraction(-1)))
            else:
                break
        return factors[0] if len(factors) == 1 else Mul(tuple(factors))

    def factor(self):
        if self.accept("-"):
            return Mul((Const(-1), self.factor()))
        base = self.atom()
        if self.accept("^"):
            return Pow(base, self.exponent())
        return base

    def exponent(self):
        start = self.tok
        if self.accept("("):
            num = self.integer()
            self.expect("/")
            den_tok = self.tok
            if self.integer(signed=False) != 2:
                self.error("2 (only half-integer exponents)", den_tok)
            self.expect(")")
            return Fraction(num, 2)
        value = Fraction(self.integer())
        if self.accept("^"):
            # right associative: a^b^c = a^(b^c)
            inner = self.exponent()
            if inner.denominator != 1 or inner < 0:
                self.error("non-negative integer exponent", start)
            value = value ** int(inner)
        return value

    def atom(self):
        tok = self.tok
        if tok.kind == "num":
            self.pos += 1
            return Const(Fraction(tok.text))
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        if tok.kind != "ident":
            self.error("number, identifier or '('")
        self.pos += 1
        name = tok.text
        if name == "i":
            return I
        if name == "sqrt":
            self.expect("(")
            e = self.expr()
            self.expect(")")
            return Pow(e, HALF)
        if name == "D":
            return self.marker(tok)
        if self.tok.kind == "op" and self.tok.text == "(":
            return self.call(tok)
        return Symbol(name)

    def _slot_list(self):
        self.expect("(")
        slots = [self.ident().text]
        while self.accept(","):
            slots.append(self.ident().text)
        self.expect(")")
        return tuple(slots)

    def _register(self, name_tok, slots):
        name = name_tok.text
        if name in RESERVED:
            self.error("function name", name_tok)
        known = self.functions.get(name)
        if known is not None and known != slots:
            raise ParseError(
                f"function {name!r} used with slots {slots}, earlier {known}",
                name_tok.span,
                self.text,
            )
        if len(set(slots)) != len(slots) or any(s in RESERVED for s in slots):
            raise ParseError(f"invalid slot list for {name!r}", name_tok.span, self.text)
        self.functions[name] = slots
        return Func(name, slots)

    def call(self, name_tok):
        return self._register(name_tok, self._slot_list())

    def marker(self, d_tok):
        self.expect("[")
        head = self.ident()
        if self.tok.kind == "op" and self.tok.text == "(":
            func = self._register(head, self._slot_list())
        else:
            func = self._register(head, self.functions.get(head.text, DEFAULT_SLOTS))
        orders = [0] * len(func.slots)
        self.expect(",")
        done = False
        while not done:
            var = self.ident()
            if var.text not in func.slots:
                raise ParseError(
                    f"{var.text!r} is not a slot of {func.name}{func.slots}", var.span, self.text
                )
            n = 1
            if self.tok.kind == "op" and self.tok.text == ",":
                self.pos += 1
                if self.tok.kind == "num":
                    n_tok = self.tok
                    n = self.integer(signed=False)
                    if n < 1:
                        self.error("positive derivative order", n_tok)
                    done = self.accept("]")
                    if not done:
                        self.expect(",")
            else:
                self.expect("]")
                done = True
            orders[func.slot_index(var.text)] += n
        return Partial(func, tuple(orders))


def parse_raw(text: str) -> Expr:
    """Parse without simplifying."""
    return _Parser(text).parse()


def parse(text: str) -> Expr:
    """Parse ``text`` into canonical form."""
    return simplify(parse_raw(text))
