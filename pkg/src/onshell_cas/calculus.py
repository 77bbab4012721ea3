"""Whole-partial derivatives on the mass shell.

For a function with explicit and implicit energy dependence
``f(p, E(p))`` the whole-partial derivative along ``p_i`` is

    d^f/d^p_i = df/dp_i + df/dE * dE/dp_i,      dE/dp_i = p_i / E

and the whole derivative along E itself is the plain explicit partial.  The
gradient is kept in terms of the symbol ``E`` rather than the root
``sqrt(p^2 + m^2)``: with that representation the commutator of the two
operators does not vanish but leaves ``(p_i/E^2) df/dE``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from . import oracle
from .errors import (
    IncompleteVelocities,
    InvalidConstraint,
    LongitudinalUndefined,
    MixedConstraints,
    UnknownVariable,
)
from .expr import (
    Const,
    Expr,
    Func,
    Symbol,
    diff,
    eval_complex,
    free_symbols,
    partial,
    simplify,
    sqrt,
    substitute,
)
from .report import Report

MOMENTA = ("p_x", "p_y", "p_z")


def _name(s) -> str:
    return s.name if isinstance(s, Symbol) else str(s)


@dataclass(frozen=True)
class Constraint:
    """``E = branch * sqrt(p^2 + m^2)`` with gradient rule ``p_i / E``."""

    dependent: Symbol
    independents: tuple
    parameter: Symbol
    branch: int
    gradient_rule: Mapping[str, Expr] = field(compare=False, hash=False)

    def gradient(self, v) -> Expr:
        name = _name(v)
        if name not in self.gradient_rule:
            raise UnknownVariable(name)
        return self.gradient_rule[name]

    @property
    def energy(self) -> Expr:
        """The shell relation as an expression in the independents."""
        radicand = sum((p * p for p in self.independents), Const(0)) + self.parameter * self.parameter
        return simplify(Const(self.branch) * sqrt(radicand))

    def knows(self, v) -> bool:
        name = _name(v)
        return name == self.dependent.name or name in self.gradient_rule

    def energy_at(self, p, m) -> float:
        return oracle.on_shell_energy(p, m, self.branch)


def on_shell(m="m", branch=1, dependent="E", independents=MOMENTA) -> Constraint:
    m, E = Symbol(_name(m)), Symbol(_name(dependent))
    ps = tuple(Symbol(_name(p)) for p in independents)
    names = [q.name for q in ps] + [E.name]
    if m.name in names or len(set(names)) != len(names):
        raise InvalidConstraint(f"symbol collision among {names + [m.name]}")
    if branch not in (1, -1):
        raise InvalidConstraint(f"branch must be +1 or -1, got {branch!r}")
    rule = {p.name: simplify(p / E) for p in ps}
    c = Constraint(E, ps, m, branch, rule)
    # the rule, evaluated on the shell, must be the derivative of the shell
    shell = c.energy
    for p in ps:
        lhs = substitute(rule[p.name], {E: shell})
        if simplify(lhs - diff(shell, p)) != Const(0):
            raise InvalidConstraint(f"gradient rule for {p.name} disagrees with the shell")
    return c


def whole_diff(e: Expr, v, c: Constraint) -> Expr:
    name = _name(v)
    if name == c.dependent.name:
        return diff(e, name)
    if name not in c.gradient_rule:
        raise UnknownVariable(name)
    return simplify(diff(e, name) + diff(e, c.dependent) * c.gradient(name))


class DiffKind(enum.Enum):
    PLAIN = "plain"
    WHOLE = "whole"


@dataclass(frozen=True)
class DiffOp:
    kind: DiffKind
    variable: Symbol
    constraint: Constraint | None = None

    def __post_init__(self):
        if isinstance(self.variable, str):
            object.__setattr__(self, "variable", Symbol(self.variable))
        if self.kind is DiffKind.WHOLE:
            if self.constraint is None:
                raise InvalidConstraint("whole derivative needs a constraint")
            if not self.constraint.knows(self.variable):
                raise UnknownVariable(self.variable.name)

    @classmethod
    def whole(cls, v, c: Constraint):
        return cls(DiffKind.WHOLE, v, c)

    @classmethod
    def plain(cls, v):
        return cls(DiffKind.PLAIN, v)

    def __call__(self, e: Expr) -> Expr:
        if self.kind is DiffKind.WHOLE:
            return whole_diff(e, self.variable, self.constraint)
        return diff(e, self.variable)


def commutator_action(a: DiffOp, b: DiffOp, f: Expr) -> Expr:
    """``a(b(f)) - b(a(f))``."""
    if (
        a.kind is DiffKind.WHOLE
        and b.kind is DiffKind.WHOLE
        and a.constraint is not b.constraint
        and a.constraint != b.constraint
    ):
        raise MixedConstraints("operators carry different constraints")
    return simplify(a(b(f)) - b(a(f)))


# --------------------------------------------------------------------------


def _sample_points(n, seed):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        p = rng.uniform(-3.0, 3.0, size=3)
        m = rng.uniform(0.5, 3.0)
        out.append((p, m))
    return out


def _env(p, m, c: Constraint):
    env = dict(zip((q.name for q in c.independents), p))
    env[c.parameter.name] = m
    env[c.dependent.name] = c.energy_at(p, m)
    return env


def _axis_symbol(axis) -> str:
    return MOMENTA[oracle.axis_index(axis)]


def verify_whole_commutator(
    f: Func | None = None,
    axis="x",
    constraint: Constraint | None = None,
    test_func=None,
    n_points=20,
    seed=0,
    tol=1e-4,
) -> Report:
    """``[d^/dp_i, d^/dE] f == (p_i/E^2) df/dE``, symbolically and numerically.

    Also checks the general intermediate form ``-(df/dE) d/dE(dE/dp_i)``
    which holds for any gradient rule.
    """
    f = f or Func("f")
    c = constraint or on_shell()
    p_i = _axis_symbol(axis)
    E = c.dependent
    comm = commutator_action(DiffOp.whole(p_i, c), DiffOp.whole(E, c), f)
    df_dE = diff(f, E)
    target = simplify(Symbol(p_i) / (E * E) * df_dE)
    general = simplify(-df_dE * diff(c.gradient(p_i), E))
    residual = simplify(comm - target)
    residual_general = simplify(comm - general)

    tf = test_func or oracle.generic_test_func()
    numeric = []
    for p, m in _sample_points(n_points, seed):
        symbolic_value = eval_complex(target, _env(p, m, c), {f.name: tf})
        oracle_value = oracle.numeric_commutator(tf, axis, p, m, branch=c.branch)
        numeric.append(((*p, m), abs(symbolic_value - oracle_value)))
    report = Report.from_residuals(
        f"whole_commutator[{p_i},E]",
        residual,
        numeric,
        tol,
        paper_ref="[d^/dp_i, d^/dE] f = (p_i/E^2) df/dE",
        details={
            "commutator": comm,
            "general_form_residual": residual_general,
            "test_function": tf.description,
        },
    )
    if residual_general != Const(0):
        report.passed = False
    return report


def verify_momentum_commutator(
    f: Func | None = None,
    axis_i="x",
    axis_j="y",
    constraint: Constraint | None = None,
    test_func=None,
    n_points=10,
    seed=0,
    tol=1e-6,
) -> Report:
    """``[d^/dp_i, d^/dp_j] f == 0`` for commuting momenta."""
    f = f or Func("f")
    c = constraint or on_shell()
    a, b = _axis_symbol(axis_i), _axis_symbol(axis_j)
    if a == b:
        raise ValueError("axes must differ")
    residual = commutator_action(DiffOp.whole(a, c), DiffOp.whole(b, c), f)
    tf = test_func or oracle.generic_test_func()
    numeric = []
    for p, m in _sample_points(n_points, seed):
        value = oracle.numeric_momentum_commutator(tf, axis_i, axis_j, p, m, h=1e-4, branch=c.branch)
        numeric.append(((*p, m), abs(value)))
    return Report.from_residuals(
        f"momentum_commutator[{a},{b}]",
        residual,
        numeric,
        tol,
        paper_ref="[d^/dp_i, d^/dp_j] f = 0 for [p_i, p_j] = 0",
        details={"test_function": tf.description},
    )


def convective_derivative(e: Expr, velocities: Mapping, t="t", constants=()) -> Expr:
    """``de/dt + sum_i v_i de/dx_i`` for fields evaluated along a path."""
    t = _name(t)
    vel = {_name(k): Symbol(_name(v)) for k, v in velocities.items()}
    skip = {t} | {v.name for v in vel.values()} | {_name(s) for s in constants}
    missing = sorted(free_symbols(e) - skip - vel.keys())
    if missing:
        raise IncompleteVelocities(f"no velocity for {', '.join(missing)}")
    out = diff(e, t)
    for x, v in vel.items():
        out = out + v * diff(e, x)
    return simplify(out)


def ansatz_coefficient(p, m):
    """Coefficient vector ``c = p/E^2`` and the scalar ``omega`` with
    ``c = omega * E_long``, ``E_long`` being the helicity-0 electric field.

    Raises ArithmeticError if the two vectors are not parallel to 1e-12
    relative precision.
    """
    c, e_long = _ansatz_vectors(p, m)
    omega = complex(np.vdot(e_long, c) / np.vdot(e_long, e_long))
    scale = float(np.linalg.norm(c) * np.linalg.norm(e_long))
    if np.linalg.norm(np.cross(c, e_long)) > 1e-12 * scale:
        raise ArithmeticError("coefficient is not parallel to the longitudinal field")
    return c, omega


def _ansatz_vectors(p, m):
    from .helicity import fields_closed_form

    p = np.asarray(p, dtype=float)
    if not np.any(p):
        raise LongitudinalUndefined("longitudinal direction undefined at p = 0")
    E = oracle.on_shell_energy(p, m)
    e_long, _ = fields_closed_form(p, m, 0)
    return p / (E * E), e_long


def parallel_residual(p, m) -> float:
    """``|c x E_long| / (|c| |E_long|)``."""
    c, e_long = _ansatz_vectors(p, m)
    return float(np.linalg.norm(np.cross(c, e_long)) / (np.linalg.norm(c) * np.linalg.norm(e_long)))


def omega_closed_form(p, m) -> complex:
    """``-i |p| / (m E^2)``, the ratio between ``p/E^2`` and ``(im/|p|) p``."""
    norm = float(np.linalg.norm(p))
    E2 = norm * norm + m * m
    return -1j * norm / (m * E2)
