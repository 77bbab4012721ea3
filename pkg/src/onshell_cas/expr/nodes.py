"""Immutable expression nodes.

Nodes are frozen dataclasses, so structural equality and hashing come for
free.  The arithmetic operators build *raw* trees; call
:func:`onshell_cas.expr.simplify` to reach canonical form.

Canonical ordering of nodes (used to sort the children of sums and
products) is: constants < i < symbols < powers < products < sums <
opaque functions < partial markers.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Tuple

IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
RESERVED = frozenset({"i", "sqrt", "D"})
DEFAULT_SLOTS = ("p_x", "p_y", "p_z", "E")

HALF = Fraction(1, 2)


class Expr:
    __slots__ = ()

    @property
    def key(self):
        raise NotImplementedError

    def __add__(self, other):
        return Add((self, as_expr(other)))

    def __radd__(self, other):
        return Add((as_expr(other), self))

    def __sub__(self, other):
        return Add((self, Mul((Const(-1), as_expr(other)))))

    def __rsub__(self, other):
        return Add((as_expr(other), Mul((Const(-1), self))))

    def __mul__(self, other):
        return Mul((self, as_expr(other)))

    def __rmul__(self, other):
        return Mul((as_expr(other), self))

    def __truediv__(self, other):
        return Mul((self, Pow(as_expr(other), Fraction(-1))))

    def __rtruediv__(self, other):
        return Mul((as_expr(other), Pow(self, Fraction(-1))))

    def __neg__(self):
        return Mul((Const(-1), self))

    def __pow__(self, exponent):
        return Pow(self, Fraction(exponent))

    def __str__(self):
        from .printer import to_string

        return to_string(self)


@dataclass(frozen=True, repr=False)
class Const(Expr):
    value: Fraction

    def __post_init__(self):
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))

    @property
    def key(self):
        return (0, self.value)

    def __repr__(self):
        return f"Const({self.value})"


@dataclass(frozen=True, repr=False)
class ImagUnit(Expr):
    @property
    def key(self):
        return (1,)

    def __repr__(self):
        return "I"


@dataclass(frozen=True, repr=False)
class Symbol(Expr):
    name: str

    def __post_init__(self):
        if not IDENT_RE.match(self.name) or self.name in RESERVED:
            raise ValueError(f"invalid symbol name {self.name!r}")

    @property
    def key(self):
        return (2, self.name)

    def __repr__(self):
        return f"Symbol({self.name!r})"


@dataclass(frozen=True, repr=False)
class Pow(Expr):
    base: Expr
    exp: Fraction

    def __post_init__(self):
        exp = Fraction(self.exp)
        if exp.denominator not in (1, 2):
            raise ValueError(f"exponent must be an integer or half-integer, got {exp}")
        object.__setattr__(self, "exp", exp)

    @property
    def key(self):
        return (3, self.base.key, self.exp)

    def __repr__(self):
        return f"Pow({self.base!r}, {self.exp})"


@dataclass(frozen=True, repr=False)
class Mul(Expr):
    factors: Tuple[Expr, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))

    @property
    def key(self):
        return (4, tuple(f.key for f in self.factors))

    def __repr__(self):
        return f"Mul({list(self.factors)!r})"


@dataclass(frozen=True, repr=False)
class Add(Expr):
    terms: Tuple[Expr, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))

    @property
    def key(self):
        return (5, tuple(t.key for t in self.terms))

    def __repr__(self):
        return f"Add({list(self.terms)!r})"


@dataclass(frozen=True, repr=False)
class Func(Expr):
    """Opaque function applied to a fixed list of slot symbols."""

    name: str
    slots: Tuple[str, ...] = DEFAULT_SLOTS

    def __post_init__(self):
        object.__setattr__(self, "slots", tuple(self.slots))
        if not IDENT_RE.match(self.name) or self.name in RESERVED:
            raise ValueError(f"invalid function name {self.name!r}")
        if len(set(self.slots)) != len(self.slots):
            raise ValueError("function slots must be distinct")
        for s in self.slots:
            Symbol(s)

    @property
    def key(self):
        return (6, self.name, self.slots)

    def slot_index(self, name):
        return self.slots.index(name)

    def __repr__(self):
        return f"Func({self.name!r}, {self.slots!r})"


@dataclass(frozen=True, repr=False)
class Partial(Expr):
    """Formal partial derivative of an opaque function.

    ``orders[k]`` is the number of derivatives taken in slot ``k``; since
    formal partials commute, a multi-index is a canonical representation of
    mixed derivatives.
    """

    func: Func
    orders: Tuple[int, ...]

    def __post_init__(self):
        orders = tuple(int(n) for n in self.orders)
        if len(orders) != len(self.func.slots):
            raise ValueError("orders must have one entry per slot")
        if any(n < 0 for n in orders) or sum(orders) < 1:
            raise ValueError("partial marker needs total order >= 1")
        object.__setattr__(self, "orders", orders)

    @property
    def key(self):
        return (7, self.func.name, self.func.slots, self.orders)

    def __repr__(self):
        return f"Partial({self.func!r}, {self.orders})"


I = ImagUnit()
ZERO = Const(0)
ONE = Const(1)


def as_expr(value) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, (int, Rational)):
        return Const(Fraction(value))
    if isinstance(value, str):
        return Symbol(value)
    raise TypeError(f"cannot convert {type(value).__name__} to Expr")


def symbols(names: str):
    """``symbols("p_x p_y")`` -> tuple of Symbol."""
    return tuple(Symbol(n) for n in names.split())


def sqrt(e) -> Pow:
    return Pow(as_expr(e), HALF)


def partial(func: Func, var: str, order: int = 1) -> Partial:
    orders = [0] * len(func.slots)
    orders[func.slot_index(var)] = order
    return Partial(func, tuple(orders))


def free_symbols(e: Expr) -> frozenset:
    """Names of symbols occurring in ``e``; opaque function slots excluded."""
    out = set()

    def walk(node):
        if isinstance(node, Symbol):
            out.add(node.name)
        elif isinstance(node, Pow):
            walk(node.base)
        elif isinstance(node, Mul):
            for f in node.factors:
                walk(f)
        elif isinstance(node, Add):
            for t in node.terms:
                walk(t)

    walk(e)
    return frozenset(out)


def opaque_functions(e: Expr) -> frozenset:
    out = set()

    def walk(node):
        if isinstance(node, Func):
            out.add(node)
        elif isinstance(node, Partial):
            out.add(node.func)
        elif isinstance(node, Pow):
            walk(node.base)
        elif isinstance(node, Mul):
            for f in node.factors:
                walk(f)
        elif isinstance(node, Add):
            for t in node.terms:
                walk(t)

    walk(e)
    return frozenset(out)
