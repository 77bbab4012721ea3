"""Substitution, formal differentiation and complex evaluation."""
from __future__ import annotations

import cmath
from typing import Callable, Mapping

from ..errors import CyclicSubstitution, NumericPole, UnboundSymbol
from .canon import simplify
from .nodes import (
    Add,
    Const,
    Expr,
    Func,
    ImagUnit,
    Mul,
    Partial,
    Pow,
    Symbol,
    as_expr,
    free_symbols,
)

POLE_EPS = 1e-300


def _name(s) -> str:
    return s.name if isinstance(s, Symbol) else str(s)


def _check_acyclic(bindings: Mapping[str, Expr]):
    graph = {k: free_symbols(v) & bindings.keys() for k, v in bindings.items()}
    state = {}

    def visit(node, path):
        mark = state.get(node)
        if mark == "done":
            return
        if mark == "active":
            raise CyclicSubstitution(" -> ".join(path + [node]))
        state[node] = "active"
        for nxt in sorted(graph[node]):
            visit(nxt, path + [node])
        state[node] = "done"

    for k in sorted(graph):
        visit(k, [])


def _replace(e: Expr, bindings) -> Expr:
    if isinstance(e, Symbol):
        return bindings.get(e.name, e)
    if isinstance(e, Add):
        return Add(tuple(_replace(t, bindings) for t in e.terms))
    if isinstance(e, Mul):
        return Mul(tuple(_replace(f, bindings) for f in e.factors))
    if isinstance(e, Pow):
        return Pow(_replace(e.base, bindings), e.exp)
    # constants, i, opaque functions and markers are left alone
    return e


def substitute(e: Expr, bindings: Mapping) -> Expr:
    """Simultaneous substitution of symbols, followed by :func:`simplify`.

    Opaque functions and partial markers are not touched: their slots are
    declared variables, not free symbols.
    """
    table = {_name(k): as_expr(v) for k, v in bindings.items()}
    _check_acyclic(table)
    return simplify(_replace(e, table))


def _diff(e: Expr, s: str) -> Expr:
    if isinstance(e, (Const, ImagUnit)):
        return Const(0)
    if isinstance(e, Symbol):
        return Const(1 if e.name == s else 0)
    if isinstance(e, Func):
        if s not in e.slots:
            return Const(0)
        orders = [0] * len(e.slots)
        orders[e.slot_index(s)] = 1
        return Partial(e, tuple(orders))
    if isinstance(e, Partial):
        if s not in e.func.slots:
            return Const(0)
        orders = list(e.orders)
        orders[e.func.slot_index(s)] += 1
        return Partial(e.func, tuple(orders))
    if isinstance(e, Add):
        return Add(tuple(_diff(t, s) for t in e.terms))
    if isinstance(e, Mul):
        terms = []
        for k, f in enumerate(e.factors):
            df = _diff(f, s)
            if df == Const(0):
                continue
            rest = e.factors[:k] + (df,) + e.factors[k + 1 :]
            terms.append(Mul(rest))
        return Add(tuple(terms)) if terms else Const(0)
    if isinstance(e, Pow):
        db = _diff(e.base, s)
        if db == Const(0):
            return Const(0)
        return Mul((Const(e.exp), Pow(e.base, e.exp - 1), db))
    raise TypeError(f"not an expression: {e!r}")


def diff(e: Expr, s) -> Expr:
    """Formal partial derivative, all other symbols held fixed."""
    return simplify(_diff(e, _name(s)))


# --------------------------------------------------------------------------


def _fd_partial(fn: Callable, args, orders, h):
    """Nested central differences for a multi-index partial."""
    orders = list(orders)
    for k, n in enumerate(orders):
        if n:
            orders[k] -= 1
            up = list(args)
            dn = list(args)
            up[k] += h
            dn[k] -= h
            return (_fd_partial(fn, up, orders, h) - _fd_partial(fn, dn, orders, h)) / (2 * h)
    return complex(fn(*args))


def _call_partial(binding, orders, args):
    partial = getattr(binding, "partial", None)
    if partial is not None:
        return complex(partial(tuple(orders), *args))
    return _fd_partial(binding, args, orders, 1e-3)


def eval_complex(e: Expr, env: Mapping, funcs: Mapping | None = None) -> complex:
    """Numeric value of ``e`` with principal-branch square roots.

    ``env`` maps symbols (or names) to numbers.  ``funcs`` maps opaque
    function names to callables of the slot values; if the callable has a
    ``partial(orders, *args)`` method it is used for markers, otherwise the
    markers are evaluated by central differences.
    """
    values = {_name(k): complex(v) for k, v in env.items()}
    funcs = funcs or {}

    def slot_args(func: Func):
        try:
            return [values[s] for s in func.slots]
        except KeyError as exc:
            raise UnboundSymbol(exc.args[0]) from None

    def ev(node):
        if isinstance(node, Const):
            return complex(node.value)
        if isinstance(node, ImagUnit):
            return 1j
        if isinstance(node, Symbol):
            try:
                return values[node.name]
            except KeyError:
                raise UnboundSymbol(node.name) from None
        if isinstance(node, Add):
            return sum((ev(t) for t in node.terms), 0j)
        if isinstance(node, Mul):
            out = 1 + 0j
            for f in node.factors:
                out *= ev(f)
            return out
        if isinstance(node, Pow):
            b = ev(node.base)
            if node.exp < 0 and abs(b) < POLE_EPS:
                raise NumericPole(f"pole at {node}")
            if node.exp.denominator == 1:
                return b ** int(node.exp)
            # principal branch on the cut: drop a negative zero imaginary part
            return cmath.sqrt(complex(b.real, b.imag + 0.0)) ** int(node.exp * 2)
        if isinstance(node, Func):
            if node.name not in funcs:
                raise UnboundSymbol(node.name)
            return complex(funcs[node.name](*slot_args(node)))
        if isinstance(node, Partial):
            if node.func.name not in funcs:
                raise UnboundSymbol(node.func.name)
            return _call_partial(funcs[node.func.name], node.orders, slot_args(node.func))
        raise TypeError(f"not an expression: {node!r}")

    return ev(e)

