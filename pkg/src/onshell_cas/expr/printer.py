"""Deterministic text form of expressions.

The output is accepted by :func:`onshell_cas.expr.parse`, and for canonical
expressions ``parse(to_string(e)) == e``.  Products are written as
``numerator/denominator * markers``, e.g. ``p_x/E^2 * D[f,E,1]``.
"""
from __future__ import annotations

from fractions import Fraction

from .nodes import (
    DEFAULT_SLOTS,
    HALF,
    Add,
    Const,
    Expr,
    Func,
    ImagUnit,
    Mul,
    Partial,
    Pow,
    Symbol,
)


def _func_head(func: Func) -> str:
    if func.slots == DEFAULT_SLOTS:
        return func.name
    return f"{func.name}({','.join(func.slots)})"


def _marker(e) -> str:
    if isinstance(e, Func):
        return f"{e.name}({','.join(e.slots)})"
    parts = [_func_head(e.func)]
    for slot, n in zip(e.func.slots, e.orders):
        if n:
            parts.append(f"{slot},{n}")
    return f"D[{','.join(parts)}]"


def _is_atomic(e: Expr) -> bool:
    if isinstance(e, Const):
        return e.value >= 0 and e.value.denominator == 1
    return isinstance(e, (Symbol, ImagUnit, Func, Partial))


def _exp_str(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"({q.numerator}/{q.denominator})"


def _power(base: Expr, exp: Fraction) -> str:
    """Power with a positive exponent."""
    if exp == 1:
        return _factor(base)
    if exp == HALF:
        return f"sqrt({to_string(base)})"
    b = to_string(base) if _is_atomic(base) else f"({to_string(base)})"
    return f"{b}^{_exp_str(exp)}"


def _factor(e: Expr) -> str:
    if isinstance(e, Pow) and e.exp > 0:
        return _power(e.base, e.exp)
    if _is_atomic(e):
        return to_string(e)
    return f"({to_string(e)})"


def _is_negative(e: Expr) -> bool:
    if isinstance(e, Const):
        return e.value < 0
    if isinstance(e, Mul):
        coeff = Fraction(1)
        for f in e.factors:
            if isinstance(f, Const):
                coeff *= f.value
        return coeff < 0
    return False


def _product(factors) -> str:
    coeff = Fraction(1)
    num, den, markers = [], [], []
    for f in factors:
        if isinstance(f, Const):
            coeff *= f.value
        elif isinstance(f, (Func, Partial)):
            markers.append(_marker(f))
        elif isinstance(f, Pow) and f.exp < 0:
            den.append(_power(f.base, -f.exp))
        else:
            num.append(_factor(f))
    sign = "-" if coeff < 0 else ""
    coeff = abs(coeff)
    if coeff.denominator != 1:
        den.insert(0, str(coeff.denominator))
    if coeff.numerator != 1 or not (num or markers) or (den and not num):
        num.insert(0, str(coeff.numerator))
    core = "*".join(num)
    if den:
        d = den[0] if len(den) == 1 else "(" + "*".join(den) + ")"
        core = f"{core}/{d}"
    if markers:
        core = " * ".join(([core] if core else []) + markers)
    return sign + core


def to_string(e: Expr) -> str:
    if isinstance(e, Const):
        v = e.value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(e, ImagUnit):
        return "i"
    if isinstance(e, Symbol):
        return e.name
    if isinstance(e, (Func, Partial)):
        return _marker(e)
    if isinstance(e, Pow):
        if e.exp < 0:
            return _product((e,))
        return _power(e.base, e.exp)
    if isinstance(e, Mul):
        if not e.factors:
            return "1"
        return _product(e.factors)
    if isinstance(e, Add):
        if not e.terms:
            return "0"
        out = []
        for k, t in enumerate(e.terms):
            if k and _is_negative(t):
                out.append(" - " + to_string(_negate(t)))
            elif k:
                out.append(" + " + _term(t))
            else:
                out.append(_term(t))
        return "".join(out)
    raise TypeError(f"not an expression: {e!r}")


def _term(t: Expr) -> str:
    return f"({to_string(t)})" if isinstance(t, Add) else to_string(t)


def _negate(t: Expr) -> Expr:
    if isinstance(t, Const):
        return Const(-t.value)
    # flip the sign of the first constant factor
    factors = list(t.factors)
    for k, f in enumerate(factors):
        if isinstance(f, Const):
            factors[k] = Const(-f.value)
            break
    factors = [f for f in factors if f != Const(1)]
    if len(factors) == 1:
        return factors[0]
    return Mul(tuple(factors))
