"""Canonical simplification.

Every expression is mapped to a normalized fraction ``N / D`` over the
Gaussian rationals where

* atoms are symbols, opaque functions, partial markers and square roots
  ``sqrt(S)`` of canonical radicands;
* ``N`` is a Laurent polynomial (non-root atoms may carry negative
  exponents), every root atom appears with exponent 0 or 1;
* ``D`` is free of roots (denominators are rationalized), has no monomial
  content and a leading coefficient of 1.

Identically zero expressions (in the sense of this ruleset) always map to
``N = 0``, which is what makes exact zero-testing possible.  There is no
polynomial GCD, so ``(x^2-1)/(x-1)`` is left as it is.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

from ..errors import DegenerateExpression
from .nodes import (
    HALF,
    Add,
    Const,
    Expr,
    Func,
    I,
    ImagUnit,
    Mul,
    Partial,
    Pow,
    Symbol,
)


class GQ:
    """Exact Gaussian rational ``(a + i*b) / d`` stored as reduced integers."""

    __slots__ = ("a", "b", "d")

    def __init__(self, re, im=0):
        re, im = Fraction(re), Fraction(im)
        d = re.denominator * im.denominator // gcd(re.denominator, im.denominator)
        self.a = re.numerator * (d // re.denominator)
        self.b = im.numerator * (d // im.denominator)
        self.d = d

    @classmethod
    def _make(cls, a, b, d):
        g = gcd(a, b, d)
        if g != 1:
            a, b, d = a // g, b // g, d // g
        if d < 0:
            a, b, d = -a, -b, -d
        out = object.__new__(cls)
        out.a, out.b, out.d = a, b, d
        return out

    @property
    def re(self) -> Fraction:
        return Fraction(self.a, self.d)

    @property
    def im(self) -> Fraction:
        return Fraction(self.b, self.d)

    def __add__(self, o):
        if self.d == o.d:
            return GQ._make(self.a + o.a, self.b + o.b, self.d)
        return GQ._make(self.a * o.d + o.a * self.d, self.b * o.d + o.b * self.d, self.d * o.d)

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        return GQ._make(
            self.a * o.a - self.b * o.b, self.a * o.b + self.b * o.a, self.d * o.d
        )

    def __neg__(self):
        out = object.__new__(GQ)
        out.a, out.b, out.d = -self.a, -self.b, self.d
        return out

    def __truediv__(self, o):
        norm = o.a * o.a + o.b * o.b
        if norm == 0:
            raise DegenerateExpression("division by zero")
        # (x/dx) / (y/dy) = x * conj(y) * dy / (|y|^2 * dx)
        return GQ._make(
            (self.a * o.a + self.b * o.b) * o.d,
            (self.b * o.a - self.a * o.b) * o.d,
            norm * self.d,
        )

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, o):
        return isinstance(o, GQ) and self.a == o.a and self.b == o.b and self.d == o.d

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __repr__(self):
        return f"GQ({self.re}, {self.im})"


G1 = GQ(1)
GI = GQ(0, 1)

# --------------------------------------------------------------------------
# polynomials: dict monomial -> GQ, monomial = tuple of (atom, exp) sorted by
# atom key with nonzero exps


def _is_root(atom):
    return isinstance(atom, Pow)


def _mono_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for atom, e in b:
        n = d.get(atom, 0) + e
        if n:
            d[atom] = n
        else:
            del d[atom]
    return tuple(sorted(d.items(), key=lambda ae: ae[0].key))


def _mono_key(mono):
    return tuple((atom.key, e) for atom, e in mono)


def p_add(a, b):
    out = dict(a)
    for m, c in b.items():
        s = out.get(m)
        s = c if s is None else s + c
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return out


def p_scale(a, c):
    if not c:
        return {}
    return {m: v * c for m, v in a.items()}


def p_mul(a, b):
    """Raw product; root atoms may end up with exponent 2."""
    out = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = _mono_mul(ma, mb)
            s = out.get(m)
            v = ca * cb
            s = v if s is None else s + v
            if s:
                out[m] = s
            else:
                out.pop(m, None)
    return out


def p_mono(mono, c=G1):
    return {mono: c}


P_ONE = {(): G1}


def _has_roots(p):
    return any(_is_root(atom) for m in p for atom, _ in m)


def _needs_reduction(p):
    return any(_is_root(atom) and e != 1 for m in p for atom, e in m)


# --------------------------------------------------------------------------


class RatFunc:
    __slots__ = ("num", "den")

    def __init__(self, num, den):
        self.num = num
        self.den = den

    def is_zero(self):
        return not self.num

    def __eq__(self, o):
        return self.num == o.num and self.den == o.den


RF_ZERO = RatFunc({}, P_ONE)
RF_ONE = RatFunc(P_ONE, P_ONE)


def rf_const(c: GQ):
    return RatFunc({(): c}, P_ONE) if c else RF_ZERO


def rf_atom(atom):
    return RatFunc({((atom, 1),): G1}, P_ONE)


@lru_cache(maxsize=4096)
def _radicand_rf(root: Pow):
    return to_rf(root.base)


@lru_cache(maxsize=4096)
def _depth(atom):
    if not _is_root(atom):
        return 0
    inner = [_depth(a) for m in _radicand_rf(atom).num for a, _ in m]
    inner += [_depth(a) for m in _radicand_rf(atom).den for a, _ in m]
    return 1 + max(inner, default=0)


def reduce_poly(p) -> RatFunc:
    """Rewrite root powers ``sqrt(S)^k`` as ``S^(k//2) * sqrt(S)^(k%2)``."""
    if not _needs_reduction(p):
        return _normalize(p, P_ONE)
    plain = {}
    acc = RF_ZERO
    for mono, c in p.items():
        if not any(_is_root(a) and e != 1 for a, e in mono):
            plain = p_add(plain, {mono: c})
            continue
        keep = []
        factor = RF_ONE
        for atom, e in mono:
            if _is_root(atom) and e != 1:
                r = e % 2
                factor = rf_mul(factor, rf_pow(_radicand_rf(atom), (e - r) // 2))
                if r:
                    keep.append((atom, 1))
            else:
                keep.append((atom, e))
        term = rf_mul(RatFunc({tuple(keep): c}, P_ONE), factor)
        acc = rf_add(acc, term)
    return rf_add(acc, _normalize(plain, P_ONE))


def _normalize(num, den) -> RatFunc:
    if not den:
        raise DegenerateExpression("division by zero")
    if not num:
        return RF_ZERO
    # rationalize: remove roots from the denominator, outermost first
    while _has_roots(den):
        root = max(
            {a for m in den for a, _ in m if _is_root(a)},
            key=lambda a: (_depth(a), a.key),
        )
        d0, d1 = {}, {}
        for m, c in den.items():
            if any(a == root for a, _ in m):
                d1[tuple((a, e) for a, e in m if a != root)] = c
            else:
                d0[m] = c
        conj = p_add(d0, p_scale(p_mul(d1, p_mono(((root, 1),))), GQ(-1)))
        n_rf = reduce_poly(p_mul(num, conj))
        d_rf = reduce_poly(p_mul(den, conj))
        if d_rf.is_zero():
            raise DegenerateExpression("denominator vanishes identically")
        num = p_mul(n_rf.num, d_rf.den)
        den = p_mul(n_rf.den, d_rf.num)
        if not num:
            return RF_ZERO
    # monomial content
    atoms = {a for m in den for a, _ in m}
    content = []
    for atom in atoms:
        low = min(dict(m).get(atom, 0) for m in den)
        if low:
            content.append((atom, -low))
    if content:
        inv = tuple(sorted(content, key=lambda ae: ae[0].key))
        den = p_mul(den, {inv: G1})
        num = p_mul(num, {inv: G1})
    lead = max(den, key=_mono_key)
    c = den[lead]
    if c != G1:
        inv_c = G1 / c
        den = p_scale(den, inv_c)
        num = p_scale(num, inv_c)
    if len(den) == 1 and () in den:
        den = P_ONE
    return RatFunc(num, den)


def rf_add(a: RatFunc, b: RatFunc) -> RatFunc:
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    if a.den == b.den:
        return _normalize(p_add(a.num, b.num), a.den)
    num = p_add(p_mul(a.num, b.den), p_mul(b.num, a.den))
    return _normalize(num, p_mul(a.den, b.den))


def rf_neg(a: RatFunc) -> RatFunc:
    return RatFunc(p_scale(a.num, GQ(-1)), a.den)


def rf_mul(a: RatFunc, b: RatFunc) -> RatFunc:
    if a.is_zero() or b.is_zero():
        return RF_ZERO
    n = reduce_poly(p_mul(a.num, b.num))
    return _normalize(n.num, p_mul(n.den, p_mul(a.den, b.den)))


def rf_inv(a: RatFunc) -> RatFunc:
    if a.is_zero():
        raise DegenerateExpression("division by zero")
    return _normalize(a.den, a.num)


def rf_pow(a: RatFunc, n: int) -> RatFunc:
    if n == 0:
        return RF_ONE
    if n < 0:
        return rf_pow(rf_inv(a), -n)
    result = RF_ONE
    base = a
    while n:
        if n & 1:
            result = rf_mul(result, base)
        n >>= 1
        if n:
            base = rf_mul(base, base)
    return result


def _rational_sqrt(q: Fraction):
    """Exact square root of a non-negative rational, or None."""
    a, b = q.numerator, q.denominator
    ra, rb = isqrt(a), isqrt(b)
    if ra * ra == a and rb * rb == b:
        return Fraction(ra, rb)
    return None


def rf_sqrt(s: RatFunc) -> RatFunc:
    if s.is_zero():
        return RF_ZERO
    if s.den == P_ONE and list(s.num) == [()]:
        c = s.num[()]
        if c.im == 0:
            q = c.re
            root = _rational_sqrt(abs(q))
            if root is None:
                atom = rf_atom(Pow(Const(abs(q)), HALF))
                return rf_mul(rf_const(GI), atom) if q < 0 else atom
            return rf_const(GQ(0, root) if q < 0 else GQ(root))
    return rf_atom(Pow(from_rf(s), HALF))


# --------------------------------------------------------------------------


def to_rf(e: Expr) -> RatFunc:
    if isinstance(e, Const):
        return rf_const(GQ(e.value))
    if isinstance(e, ImagUnit):
        return rf_const(GI)
    if isinstance(e, (Symbol, Func, Partial)):
        return rf_atom(e)
    if isinstance(e, Add):
        acc = RF_ZERO
        for t in e.terms:
            acc = rf_add(acc, to_rf(t))
        return acc
    if isinstance(e, Mul):
        # convert every factor first so 0 * (1/0) still raises
        acc = RF_ONE
        for part in [to_rf(f) for f in e.factors]:
            acc = rf_mul(acc, part)
        return acc
    if isinstance(e, Pow):
        base = to_rf(e.base)
        if e.exp.denominator == 1:
            n = int(e.exp)
            if base.is_zero():
                if n < 0:
                    raise DegenerateExpression("division by zero")
                return RF_ONE if n == 0 else RF_ZERO
            return rf_pow(base, n)
        k = int(e.exp * 2)
        root = rf_sqrt(base)
        if root.is_zero():
            if k < 0:
                raise DegenerateExpression("division by zero")
            return RF_ZERO
        return rf_pow(root, k)
    raise TypeError(f"not an expression: {e!r}")


def _term(c: Fraction, imag: bool, mono) -> Expr:
    factors = []
    if c != 1:
        factors.append(Const(c))
    if imag:
        factors.append(I)
    for atom, e in mono:
        factors.append(atom if e == 1 else Pow(atom, Fraction(e)))
    return _make_mul(factors)


def _make_mul(factors):
    if not factors:
        return Const(1)
    if len(factors) == 1:
        return factors[0]
    return Mul(tuple(sorted(factors, key=lambda f: f.key)))


def _poly_expr(p) -> Expr:
    terms = []
    for mono, c in p.items():
        if c.re:
            terms.append(_term(c.re, False, mono))
        if c.im:
            terms.append(_term(c.im, True, mono))
    if not terms:
        return Const(0)
    if len(terms) == 1:
        return terms[0]
    return Add(tuple(sorted(terms, key=lambda t: t.key)))


def from_rf(rf: RatFunc) -> Expr:
    num = _poly_expr(rf.num)
    if rf.den == P_ONE or not rf.num:
        return num
    den = Pow(_poly_expr(rf.den), Fraction(-1))
    if num == Const(1):
        return den
    factors = list(num.factors) if isinstance(num, Mul) else [num]
    return _make_mul(factors + [den])


def simplify(e: Expr) -> Expr:
    """Canonical form of ``e``; the literal ``Const(0)`` iff ``e`` is zero.

    Raises DegenerateExpression on division by an expression that is
    identically zero.
    """
    return from_rf(to_rf(e))


def is_zero(e: Expr) -> bool:
    return to_rf(e).is_zero()
