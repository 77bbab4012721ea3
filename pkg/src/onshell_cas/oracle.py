"""Finite-difference oracle for whole-partial derivatives.

Everything here is plain floating point and deliberately shares no code with
the symbolic engine, so the two can check each other.  The energy is always
put on the mass shell ``E = branch * sqrt(p^2 + m^2)``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import NumericPole

AXES = {"x": 0, "y": 1, "z": 2, "p_x": 0, "p_y": 1, "p_z": 2, 0: 0, 1: 1, 2: 2}


def axis_index(axis) -> int:
    try:
        return AXES[axis]
    except (KeyError, TypeError):
        raise ValueError(f"unknown axis {axis!r}") from None


@dataclass
class TestFunc:
    """A concrete stand-in for an opaque ``f(p_x, p_y, p_z, E)``.

    ``partial(orders, *args)`` gives analytic partials when ``partial_fn`` is
    set; otherwise callers fall back to finite differences.
    """

    __test__ = False  # not a pytest class

    fn: Callable[..., complex]
    description: str = ""
    partial_fn: Optional[Callable[..., complex]] = field(default=None, repr=False)

    def __call__(self, px, py, pz, E):
        return complex(self.fn(px, py, pz, E))

    @property
    def partial(self):
        return self.partial_fn

    @classmethod
    def exp_sum(cls, coeffs: Sequence[complex], rates: Sequence[Sequence[float]], description=""):
        """``sum_k c_k exp(a_k . (p_x, p_y, p_z, E))`` with exact partials."""
        coeffs = [complex(c) for c in coeffs]
        rates = [tuple(float(a) for a in r) for r in rates]

        def fn(*args):
            return sum(c * cmath.exp(sum(a * x for a, x in zip(r, args))) for c, r in zip(coeffs, rates))

        def partial_fn(orders, *args):
            total = 0j
            for c, r in zip(coeffs, rates):
                weight = c
                for a, n in zip(r, orders):
                    weight *= a**n
                total += weight * cmath.exp(sum(a * x for a, x in zip(r, args)))
            return total

        desc = description or f"exp-sum with {len(coeffs)} terms"
        return cls(fn, desc, partial_fn)


def generic_test_func() -> TestFunc:
    """Fixed smooth function with all four slots mixed together."""
    return TestFunc.exp_sum(
        [1.0, -0.7, 0.4 + 0.3j],
        [(0.3, -0.2, 0.1, 0.25), (-0.15, 0.35, 0.2, -0.3), (0.05, 0.1, -0.25, 0.4)],
        "generic exp-sum",
    )


def on_shell_energy(p, m, branch=1):
    p = np.asarray(p, dtype=float)
    return branch * math.sqrt(float(p @ p) + m * m)


def _safe(f, *args):
    try:
        value = complex(f(*args))
    except (ZeroDivisionError, OverflowError, ValueError) as exc:
        raise NumericPole(str(exc)) from exc
    if not np.isfinite(value):
        raise NumericPole(f"non-finite value at {args}")
    return value


def _shift(p, i, h):
    q = np.array(p, dtype=float)
    q[i] += h
    return q


def _e_slot(F, p, E, h):
    return (_safe(F, *p, E + h) - _safe(F, *p, E - h)) / (2 * h)


def _p_slot(F, p, E, i, h):
    return (_safe(F, *_shift(p, i, h), E) - _safe(F, *_shift(p, i, -h), E)) / (2 * h)


def _along_shell(F, p, i, m, h, branch):
    up = _shift(p, i, h)
    dn = _shift(p, i, -h)
    return (
        _safe(F, *up, on_shell_energy(up, m, branch)) - _safe(F, *dn, on_shell_energy(dn, m, branch))
    ) / (2 * h)


def _check_step(p, m, h, branch):
    if h <= 0:
        raise ValueError("step must be positive")
    if abs(on_shell_energy(p, m, branch)) < 10 * h:
        raise NumericPole("energy too close to zero for the step size")


def numeric_whole_diff(f, axis, point, m, h=1e-6, branch=1) -> complex:
    """Central difference of ``g(p) = f(p, E(p))`` along one momentum axis."""
    _check_step(point, m, h, branch)
    return _along_shell(f, point, axis_index(axis), m, h, branch)


def numeric_commutator(f, axis, point, m, h=1e-6, branch=1) -> complex:
    """``[d^/dp_i, d/dE] f`` at an on-shell point.

    ``h`` is the inner step (explicit-slot differences); the outer step is
    ``sqrt(h)``.  The E-slot derivative perturbs E off the shell with p held
    fixed, and the whole derivative uses ``dE/dp_i = p_i/E`` as a function
    of the explicit E slot.
    """
    _check_step(point, m, h, branch)
    i = axis_index(axis)
    p = np.asarray(point, dtype=float)
    h_out = math.sqrt(h)

    def d_e(px, py, pz, E):
        return _e_slot(f, (px, py, pz), E, h)

    def whole_i(px, py, pz, E):
        q = (px, py, pz)
        return _p_slot(f, q, E, i, h) + _e_slot(f, q, E, h) * q[i] / E

    E0 = on_shell_energy(p, m, branch)
    first = _along_shell(d_e, p, i, m, h_out, branch)
    second = _e_slot(whole_i, p, E0, h_out)
    return first - second


def numeric_momentum_commutator(f, axis_i, axis_j, point, m, h=1e-4, branch=1) -> complex:
    """``[d^/dp_i, d^/dp_j] f`` by nested differences along the shell.

    Both levels use step ``h``: the two orders share their leading
    truncation terms, so a small outer step costs nothing.
    """
    _check_step(point, m, h, branch)
    i, j = axis_index(axis_i), axis_index(axis_j)
    p = np.asarray(point, dtype=float)
    h_out = h

    def whole(k):
        def g(px, py, pz, E):
            q = (px, py, pz)
            return _p_slot(f, q, E, k, h) + _e_slot(f, q, E, h) * q[k] / E

        return g

    return _along_shell(whole(j), p, i, m, h_out, branch) - _along_shell(whole(i), p, j, m, h_out, branch)


def convergence_ratio(f, axis, point, m, exact, h=1e-2, branch=1) -> float:
    """Error ratio err(h) / err(h/2) of :func:`numeric_whole_diff`."""
    e1 = abs(numeric_whole_diff(f, axis, point, m, h, branch) - exact)
    e2 = abs(numeric_whole_diff(f, axis, point, m, h / 2, branch) - exact)
    return e1 / e2
