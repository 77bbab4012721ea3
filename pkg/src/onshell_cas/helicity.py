"""Helicity-basis polarization vectors and the fields they carry.

Polarization vectors are returned with *lower* (covariant) indices,
``eps_mu = (eps_0, eps_1, eps_2, eps_3)``, metric ``(+,-,-,-)``.  The
azimuth enters through ``cos(phi) = p_x/p_perp`` and ``sin(phi) = p_y/p_perp``;
on the z axis (``p_perp = 0``) the limit ``phi -> 0`` is used.  The
conventions ``p_r = p_x + i p_y`` and ``p_l = p_x - i p_y`` are assumed for
the closed-form fields.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import MomentumZero
from .report import Report

METRIC = np.diag([1.0, -1.0, -1.0, -1.0])
HELICITIES = (1, -1, 0, "0t")
SQRT2 = math.sqrt(2.0)

# closed-form fields = phase * potential-derived fields (derived once by
# field_phase over random momenta, see tests)
FIELD_PHASES = {1: 1 + 0j, -1: 1 + 0j, 0: 1 + 0j}

# relative p_perp below which the closed-form fields switch to the regular
# rewrite; the literal 1/p_r, 1/p_l form loses about |p|/p_perp digits
POLE_CUTOFF = 1e-3


def _lam(lam):
    if lam in ("0t", "0_t", "t"):
        return "0t"
    if lam in ("+1", "+"):
        return 1
    if lam in ("-1", "-"):
        return -1
    if lam in (1, -1, 0) or lam == "0":
        return int(lam)
    raise ValueError(f"unknown helicity {lam!r}")


def _kinematics(p, m):
    p = np.asarray(p, dtype=float)
    norm = float(np.linalg.norm(p))
    if norm == 0.0:
        raise MomentumZero("helicity states need |p| > 0")
    if m <= 0:
        raise ValueError("mass must be positive")
    perp = math.hypot(p[0], p[1])
    if perp > 0.0:
        c, s = p[0] / perp, p[1] / perp
    else:
        c, s = 1.0, 0.0
    E = math.sqrt(norm * norm + m * m)
    return p, norm, perp, c, s, E


def polarization(p, m, lam) -> np.ndarray:
    lam = _lam(lam)
    p, P, perp, c, s, E = _kinematics(p, m)
    px, py, pz = p
    if lam == 1:
        phase = complex(c, s) / (SQRT2 * P)
        return phase * np.array([0, c * pz - 1j * s * P, s * pz + 1j * c * P, -perp])
    if lam == -1:
        phase = complex(c, -s) / (SQRT2 * P)
        return phase * np.array([0, -c * pz - 1j * s * P, -s * pz + 1j * c * P, perp])
    if lam == 0:
        return np.array([P, -E * px / P, -E * py / P, -E * pz / P], dtype=complex) / m
    return np.array([E, -px, -py, -pz], dtype=complex) / m


def raise_index(v) -> np.ndarray:
    return METRIC @ np.asarray(v)


def transversality(p, m, lam) -> complex:
    """``p^mu eps_mu`` with ``p^mu = (E, p)``."""
    p_arr, _, _, _, _, E = _kinematics(p, m)
    upper = np.concatenate([[E], p_arr])
    return complex(upper @ polarization(p, m, lam))


def fields_closed_form(p, m, lam):
    """Electric and magnetic field amplitudes for helicity ``lam``."""
    lam = _lam(lam)
    if lam == "0t":
        raise ValueError("closed-form fields are given for helicities +1, -1, 0")
    p, P, perp, c, s, E = _kinematics(p, m)
    px, py, pz = p
    if lam == 0:
        return (1j * m / P) * p.astype(complex), np.zeros(3, dtype=complex)
    if perp > POLE_CUTOFF * P:
        p_r, p_l = complex(px, py), complex(px, -py)
        tilde = np.array([py, -px, -1j * P])
        if lam == 1:
            e = -(1j * E * pz / (SQRT2 * P * p_l)) * p - (E / (SQRT2 * p_l)) * tilde
            b = -(pz / (SQRT2 * p_l)) * p + (1j * P / (SQRT2 * p_l)) * tilde
        else:
            e = (1j * E * pz / (SQRT2 * P * p_r)) * p - (E / (SQRT2 * p_r)) * tilde.conj()
            b = -(pz / (SQRT2 * p_r)) * p - (1j * P / (SQRT2 * p_r)) * tilde.conj()
        return e, b
    # same formulas with p_x = p_perp cos(phi), p_y = p_perp sin(phi) and the
    # 1/p_perp cancelled by hand; regular as p_perp -> 0
    if lam == 1:
        ph = complex(c, s) / SQRT2
        e = -E * ph * np.array([1j * pz * c / P + s, 1j * pz * s / P - c, -1j * perp / P])
        b = -ph * np.array([pz * c - 1j * P * s, pz * s + 1j * P * c, -perp])
    else:
        ph = complex(c, -s) / SQRT2
        e = E * ph * np.array([1j * pz * c / P - s, 1j * pz * s / P + c, -1j * perp / P])
        b = -ph * np.array([pz * c + 1j * P * s, pz * s - 1j * P * c, -perp])
    return e, b


def fields_from_potential(p, m, lam, sign=None):
    """Fields of the plane wave ``A^mu = eps^mu exp(sign * i p.x)``.

    ``E = -grad A^0 - dA/dt = sign*i (p A^0 - E A)`` and
    ``B = curl A = -sign*i (p x A)``.  With ``sign=None`` the sign is
    calibrated so that the helicity-0 field is ``+(im/|p|) p``.
    """
    if sign is None:
        sign = calibrate_planewave_sign()
    if sign not in (1, -1):
        raise ValueError("plane-wave sign must be +1 or -1")
    p_arr, _, _, _, _, E = _kinematics(p, m)
    upper = raise_index(polarization(p, m, lam))
    eps0, vec = upper[0], upper[1:]
    e = sign * 1j * (p_arr * eps0 - E * vec)
    b = -sign * 1j * np.cross(p_arr, vec)
    return e, b


def calibrate_planewave_sign() -> int:
    target, _ = fields_closed_form((0.0, 0.0, 1.0), 1.0, 0)
    for sign in (1, -1):
        e, _ = fields_from_potential((0.0, 0.0, 1.0), 1.0, 0, sign)
        if np.allclose(e, target, rtol=0, atol=1e-14):
            return sign
    raise ArithmeticError("no plane-wave sign reproduces the longitudinal field")


def field_phase(p, m, lam, sign=None):
    """Best unimodular phase with closed = phase * derived; returns (phase, residual)."""
    ec, bc = fields_closed_form(p, m, lam)
    ed, bd = fields_from_potential(p, m, lam, sign)
    closed = np.concatenate([ec, bc])
    derived = np.concatenate([ed, bd])
    phase = complex(np.vdot(derived, closed) / np.vdot(derived, derived))
    residual = float(np.linalg.norm(closed - phase * derived))
    return phase, residual


def gram_matrix(p, m) -> np.ndarray:
    """``G[a, b] = eps_mu(a) g^{mu nu} eps*_nu(b)`` in the order (+1, -1, 0, 0t)."""
    vecs = [polarization(p, m, lam) for lam in HELICITIES]
    return np.array([[a @ METRIC @ b.conj() for b in vecs] for a in vecs])


@dataclass
class PolState:
    momentum: np.ndarray
    helicity: object
    eps: np.ndarray
    E_field: np.ndarray
    B_field: np.ndarray
    convention: int


def pol_state(p, m, lam, sign=None) -> PolState:
    lam = _lam(lam)
    sign = calibrate_planewave_sign() if sign is None else sign
    if lam == "0t":
        e, b = fields_from_potential(p, m, lam, sign)
    else:
        e, b = fields_closed_form(p, m, lam)
    return PolState(np.asarray(p, dtype=float), lam, polarization(p, m, lam), e, b, sign)


# --------------------------------------------------------------------------


def parity_image(p, m, lam) -> np.ndarray:
    """``g . eps(-p, lam)``: the parity-transformed vector."""
    return METRIC @ polarization(-np.asarray(p, dtype=float), m, lam)


def verify_parity(p, m, lam, tol=1e-10) -> Report:
    """Find ``(lam', eta)`` with ``g . eps(-p, lam') = eta * eps(p, lam)``."""
    lam = _lam(lam)
    target = polarization(p, m, lam)
    candidates = [lam] if lam in (0, "0t") else [lam, -lam]
    scale = float(np.linalg.norm(target))
    found = []
    residuals = []
    for cand in candidates:
        image = parity_image(p, m, cand)
        eta = complex(np.vdot(target, image) / np.vdot(target, target))
        resid = float(np.linalg.norm(image - eta * target)) / scale
        residuals.append((cand, resid))
        if resid <= tol and abs(abs(eta) - 1.0) <= tol:
            found.append((cand, eta))
    ok = len(found) == 1
    details = {"lambda": str(lam), "candidates": {str(c): r for c, r in residuals}}
    if ok:
        details["lambda_prime"] = str(found[0][0])
        details["eta"] = found[0][1]
    best = min(r for _, r in residuals)
    return Report(
        f"parity[lambda={lam}]",
        ok,
        None,
        [(tuple(np.asarray(p, dtype=float)) + (m,), best)],
        tol,
        paper_ref="parity acts on polarization vectors as the metric tensor",
        details=details,
    )


def verify_longitudinal_ansatz(p, m, tol=1e-12) -> Report:
    """``p/E^2`` is parallel to the helicity-0 electric field."""
    from . import calculus

    c, omega = calculus.ansatz_coefficient(p, m)
    parallel = calculus.parallel_residual(p, m)
    expected = calculus.omega_closed_form(p, m)
    omega_res = abs(omega - expected) / abs(expected)
    point = tuple(np.asarray(p, dtype=float)) + (m,)
    return Report.from_residuals(
        "longitudinal_ansatz",
        None,
        [(point, parallel), (point, omega_res)],
        tol,
        paper_ref="(p_i/E^2) is the longitudinal electric field in the helicity basis",
        details={"c": c, "omega": omega, "omega_closed_form": expected},
    )
