"""Noncommutative polynomials with 4x4 matrix coefficients.

Generators are the momenta, the energy and the central symbols
``theta_i``, ``B_i`` and ``m``.  A word is a tuple of generator indices;
its normal form lists generators in the canonical order
``p_x < p_y < p_z < E < theta_x < ... < B_z < m``.  Matrix coefficients
commute with every generator (they act on spinor indices only).

Rewriting uses ``b a -> a b + [b, a]`` for ``b > a``: each swap removes one
inversion and the emitted commutator term has lower momentum/energy degree,
so normal ordering terminates.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product

import numpy as np

from . import matrixalg as mx
from .report import Report

GENERATORS = ("p_x", "p_y", "p_z", "E", "theta_x", "theta_y", "theta_z", "B_x", "B_y", "B_z", "m")
GEN_INDEX = {g: k for k, g in enumerate(GENERATORS)}
P = (0, 1, 2)
E = 3
THETA = (4, 5, 6)
B = (7, 8, 9)
M = 10
CENTRAL = frozenset(THETA + B + (M,))
DYNAMIC = frozenset(P + (E,))

_EPS = {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1, (0, 2, 1): -1, (2, 1, 0): -1, (1, 0, 2): -1}


def levi_civita(i, j, k) -> int:
    return _EPS.get((i, j, k), 0)


def _key(coeff: np.ndarray):
    return coeff


class NCPoly:
    """Finitely supported map word -> 4x4 complex coefficient."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        for w, c in (terms or {}).items():
            self._accumulate(tuple(w), np.asarray(c, dtype=complex))

    def _accumulate(self, word, coeff):
        if word in self.terms:
            coeff = self.terms[word] + coeff
        if np.any(coeff != 0):
            self.terms[word] = coeff
        else:
            self.terms.pop(word, None)

    # constructors ---------------------------------------------------------

    @classmethod
    def scalar(cls, value=1, word=()):
        return cls({tuple(word): value * mx.I4})

    @classmethod
    def gen(cls, name, coeff=None):
        c = mx.I4 if coeff is None else coeff
        return cls({(GEN_INDEX[name],): c})

    @classmethod
    def matrix(cls, coeff, word=()):
        return cls({tuple(word): coeff})

    # ring operations ------------------------------------------------------

    def __add__(self, other):
        out = NCPoly(self.terms)
        for w, c in other.terms.items():
            out._accumulate(w, c)
        return out

    def __neg__(self):
        return NCPoly({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, NCPoly):
            return NCPoly({w: other * c for w, c in self.terms.items()})
        return nc_mul(self, other)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((_dyn_degree(w) for w in self.terms), default=0)

    def coefficient(self, word) -> np.ndarray:
        word = tuple(GEN_INDEX[g] if isinstance(g, str) else g for g in word)
        return self.terms.get(word, np.zeros((4, 4), dtype=complex))

    def __eq__(self, other):
        if not isinstance(other, NCPoly) or self.terms.keys() != other.terms.keys():
            return False
        return all(np.array_equal(c, other.terms[w]) for w, c in self.terms.items())

    def __repr__(self):
        return f"NCPoly({format_ncpoly(self)})"


def _dyn_degree(word) -> int:
    return sum(1 for g in word if g in DYNAMIC)


def nc_mul(a: NCPoly, b: NCPoly) -> NCPoly:
    """Distributive product; words are concatenated, not reordered."""
    out = NCPoly()
    for (wa, ca), (wb, cb) in product(a.terms.items(), b.terms.items()):
        out._accumulate(wa + wb, ca @ cb)
    return out


def compress(word):
    """``(p_x, p_x, E)`` -> ``[("p_x", 2), ("E", 1)]``."""
    out = []
    for g in word:
        name = GENERATORS[g]
        if out and out[-1][0] == name:
            out[-1] = (name, out[-1][1] + 1)
        else:
            out.append((name, 1))
    return out


# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CommutationTable:
    """``[E, p_i] = theta_i`` (when ``theta``) and optionally
    ``[p_i, p_j] = i eps_ijk B_k`` (``feynman``); all other pairs commute.
    """

    theta: bool = True
    feynman: bool = False

    def __post_init__(self):
        failures = table_failures(self)
        if failures:
            raise ValueError(f"inconsistent commutation table: {failures[:3]}")

    def bracket(self, x: int, y: int):
        """``[x, y]`` as a list of (scalar, word) with central words."""
        if x == y or x in CENTRAL or y in CENTRAL:
            return []
        if self.theta and x == E and y in P:
            return [(1, (THETA[y],))]
        if self.theta and y == E and x in P:
            return [(-1, (THETA[x],))]
        if self.feynman and x in P and y in P:
            return [
                (1j * levi_civita(x, y, k), (B[k],))
                for k in range(3)
                if levi_civita(x, y, k)
            ]
        return []


def _first_inversion(word, rng=None):
    spots = [k for k in range(len(word) - 1) if word[k] > word[k + 1]]
    if not spots:
        return None
    return spots[0] if rng is None else rng.choice(spots)


def _normal_order(q: NCPoly, table: CommutationTable, rng=None) -> NCPoly:
    done = NCPoly()
    pending = dict(q.terms)
    while pending:
        word, coeff = pending.popitem()
        k = _first_inversion(word, rng)
        if k is None:
            done._accumulate(word, coeff)
            continue
        b, a = word[k], word[k + 1]
        head, tail = word[:k], word[k + 2 :]
        emitted = [(head + (a, b) + tail, coeff)]
        for scale, w in table.bracket(b, a):
            emitted.append((head + w + tail, scale * coeff))
        for w, c in emitted:
            if w in pending:
                c = pending[w] + c
            if np.any(c != 0):
                pending[w] = c
            else:
                pending.pop(w, None)
    return done


def normal_order(q: NCPoly, table: CommutationTable | None = None, rng=None) -> NCPoly:
    """Rewrite every word into canonical order.

    ``rng`` (a ``random.Random``) picks which inversion to rewrite first;
    by confluence the result does not depend on it.
    """
    return _normal_order(q, table or CommutationTable(), rng)


def table_failures(table: CommutationTable):
    """Jacobi identity and overlap confluence on all generator triples."""
    failures = []
    gens = range(len(GENERATORS))

    def br(x, y):
        return NCPoly({w: s * mx.I4 for s, w in table.bracket(x, y)})

    def gen(x):
        return NCPoly({(x,): mx.I4})

    def commute(x, poly):
        return gen(x) * poly - poly * gen(x)

    for x, y, z in product(gens, repeat=3):
        if x < y < z or (x, y, z) == (x, x, x):
            pass
        if not (x < y < z):
            continue
        jac = commute(x, br(y, z)) + commute(y, br(z, x)) + commute(z, br(x, y))
        if not _normal_order(jac, table).is_zero():
            failures.append(("jacobi", GENERATORS[x], GENERATORS[y], GENERATORS[z]))
        # overlap z y x: rewrite (z y) first vs (y x) first
        word = NCPoly({(z, y, x): mx.I4})
        left = _resolve_overlap(word, table, 0)
        right = _resolve_overlap(word, table, 1)
        if left != right:
            failures.append(("overlap", GENERATORS[z], GENERATORS[y], GENERATORS[x]))
    return failures


def _resolve_overlap(q: NCPoly, table, position) -> NCPoly:
    (word, coeff), = q.terms.items()
    b, a = word[position], word[position + 1]
    head, tail = word[:position], word[position + 2 :]
    step = NCPoly({head + (a, b) + tail: coeff})
    for s, w in table.bracket(b, a):
        step = step + NCPoly({head + w + tail: s * coeff})
    return _normal_order(step, table)


# --------------------------------------------------------------------------


def dirac_factors():
    """``(E + alpha.p + m beta, E - alpha.p - m beta)``."""
    alpha_p = NCPoly()
    for i in P:
        alpha_p = alpha_p + NCPoly({(i,): mx.alpha(i + 1)})
    m_beta = NCPoly({(M,): mx.beta()})
    energy = NCPoly({(E,): mx.I4})
    return energy + alpha_p + m_beta, energy - alpha_p - m_beta


def expand_dirac_product(table: CommutationTable | None = None) -> NCPoly:
    left, right = dirac_factors()
    return normal_order(nc_mul(left, right), table)


def dispersion_target(theta=True) -> NCPoly:
    """``(E^2 - p^2 - m^2) I - alpha . theta``."""
    out = NCPoly({(E, E): mx.I4, (M, M): -mx.I4})
    for i in P:
        out = out + NCPoly({(i, i): -mx.I4})
        if theta:
            out = out + NCPoly({(THETA[i],): -mx.alpha(i + 1)})
    return out


def spin_field_term() -> NCPoly:
    """``Sigma . B``."""
    out = NCPoly()
    for k in range(3):
        out = out + NCPoly({(B[k],): mx.spin(k + 1)})
    return out


def verify_dirac_product(table: CommutationTable | None = None) -> Report:
    """The squared Dirac operator normal-orders to ``E^2 - p^2 - m^2 - alpha.theta``."""
    table = table or CommutationTable()
    expanded = expand_dirac_product(table)
    target = dispersion_target(theta=table.theta)
    if table.feynman:
        target = target + spin_field_term()
    residual = expanded - target
    return Report(
        "dirac_product",
        residual.is_zero(),
        None,
        [],
        0.0,
        paper_ref="(E + a.p + m b)(E - a.p - m b) = E^2 - p^2 - m^2 - a.theta",
        details={
            "expanded": format_ncpoly(expanded),
            "residual": format_ncpoly(residual),
            "table": {"theta": table.theta, "feynman": table.feynman},
        },
    )


def substitute_central(q: NCPoly, values) -> NCPoly:
    """Replace central generators by numbers, e.g. ``{"theta_z": 1.0}``."""
    idx = {GEN_INDEX[k]: complex(v) for k, v in values.items()}
    if not set(idx) <= CENTRAL:
        raise ValueError("only central generators can be replaced by numbers")
    out = NCPoly()
    for w, c in q.terms.items():
        scale = 1 + 0j
        kept = []
        for g in w:
            if g in idx:
                scale *= idx[g]
            else:
                kept.append(g)
        out._accumulate(tuple(kept), scale * c)
    return out


# printing -----------------------------------------------------------------

_BLOCK = (np.eye(2), mx.pauli(1), mx.pauli(2), mx.pauli(3))
_BASIS_NAMES = {
    (0, 0): "I",
    (3, 1): "alpha_x",
    (3, 2): "alpha_y",
    (3, 3): "alpha_z",
    (1, 0): "beta",
    (0, 1): "Sigma_x",
    (0, 2): "Sigma_y",
    (0, 3): "Sigma_z",
    (3, 0): "gamma5",
}


def dirac_basis():
    """The 16 matrices ``tau_a (x) sigma_b``; ``tau`` acts on the 2x2 blocks."""
    out = []
    for a, b in product(range(4), range(4)):
        name = _BASIS_NAMES.get((a, b), f"tau{a}sigma{b}")
        out.append((name, np.kron(_BLOCK[a], _BLOCK[b])))
    return out


def decompose(coeff: np.ndarray):
    """Coefficients of ``coeff`` in :func:`dirac_basis` (trace inner product)."""
    out = []
    for name, basis in dirac_basis():
        c = complex(np.trace(mx.dagger(basis) @ coeff) / 4)
        if c != 0:
            out.append((name, c))
    return out


def _num(c: complex) -> str:
    def real(x):
        return str(int(x)) if float(x).is_integer() else repr(float(x))

    if c.imag == 0:
        return real(c.real)
    if c.real == 0:
        return "i" if c.imag == 1 else f"{real(c.imag)}i"
    return f"({real(c.real)}{'+' if c.imag >= 0 else '-'}{real(abs(c.imag))}i)"


def _word_str(word) -> str:
    parts = [name if n == 1 else f"{name}^{n}" for name, n in compress(word)]
    return "*".join(parts)


def ncpoly_items(q: NCPoly):
    """Deterministic (word, [(basis name, coefficient)]) list."""
    order = sorted(q.terms, key=lambda w: (-_dyn_degree(w), -len(w), w))
    return [(w, decompose(q.terms[w])) for w in order]


def format_ncpoly(q: NCPoly) -> str:
    if q.is_zero():
        return "0"
    chunks = []
    for word, parts in ncpoly_items(q):
        for name, c in parts:
            chunks.append((c, name, _word_str(word)))
    out = []
    for k, (c, name, word) in enumerate(chunks):
        neg = (c.imag == 0 and c.real < 0) or (c.real == 0 and c.imag < 0)
        mag = -c if neg else c
        factors = [] if mag == 1 else [_num(mag)]
        if name != "I" or not word:
            factors.append(name)
        if word:
            factors.append(word)
        text = "*".join(factors)
        if k == 0:
            out.append(("-" if neg else "") + text)
        else:
            out.append((" - " if neg else " + ") + text)
    return "".join(out)


def random_ncpoly(rng: random.Random, max_degree=4, n_terms=3) -> NCPoly:
    """Random polynomial with small Gaussian-integer Dirac-basis coefficients."""
    basis = dirac_basis()
    out = NCPoly()
    for _ in range(n_terms):
        length = rng.randint(0, max_degree)
        word = tuple(rng.randrange(len(GENERATORS)) for _ in range(length))
        name, mat = basis[rng.randrange(len(basis))]
        scale = complex(rng.randint(-2, 2), rng.randint(-1, 1)) or 1
        out = out + NCPoly({word: scale * mat})
    return out
