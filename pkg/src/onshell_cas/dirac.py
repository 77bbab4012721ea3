"""Mass splitting and dispersion for ``[E^2 - p^2 - m^2 - gamma5 |theta|] psi = 0``.

Only the positive energy branch is reported; the negative branch is the
mirror ``-E``.  The ``gamma5 = +1`` block carries ``+|theta|``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import matrixalg as mx
from .report import Report


@dataclass
class SpectrumResult:
    m_plus: complex
    m_minus: complex
    energies: tuple
    tachyonic: bool
    chirality: dict = field(default_factory=lambda: {"+1": "+|theta|", "-1": "-|theta|"})
    method: str = "closed form"

    def to_dict(self):
        def c(z):
            z = complex(z)
            return [z.real, z.imag]

        return {
            "m_plus": c(self.m_plus),
            "m_minus": c(self.m_minus),
            "E_plus": c(self.energies[0]),
            "E_minus": c(self.energies[1]),
            "tachyonic": self.tachyonic,
            "chirality": dict(self.chirality),
            "method": self.method,
        }


def _root(x: float) -> complex:
    """Real root for x >= 0, ``i sqrt(-x)`` below."""
    return complex(math.sqrt(x)) if x >= 0 else 1j * math.sqrt(-x)


def _norm(v) -> float:
    return float(np.linalg.norm(np.asarray(v, dtype=float)))


def _p2(p) -> float:
    p = np.asarray(p, dtype=float)
    return float(p @ p)


def dispersion(p, m_sq, theta) -> SpectrumResult:
    t = _norm(theta)
    p2 = _p2(p)
    if m_sq + p2 < 0:
        raise ValueError("need m_sq + |p|^2 >= 0")
    return SpectrumResult(
        m_plus=_root(m_sq + t),
        m_minus=_root(m_sq - t),
        energies=(_root(p2 + m_sq + t), _root(p2 + m_sq - t)),
        tachyonic=m_sq < t,
    )


def mass_split(m_sq, theta) -> SpectrumResult:
    if m_sq < 0:
        raise ValueError("m_sq must be non-negative")
    return dispersion((0.0, 0.0, 0.0), m_sq, theta)


def spectrum_via_eigen(p, m_sq, theta) -> SpectrumResult:
    """Diagonalize ``(p^2 + m_sq) I + alpha . theta`` by Jacobi rotations.

    Eigenvalues come in two doubly degenerate pairs ``E_-^2 <= E_+^2``.  The
    eigenvector chirality is read off after the ``U2 diag(U1, U1)`` chain.
    """
    theta = np.asarray(theta, dtype=float)
    h = (_p2(p) + m_sq) * mx.I4 + mx.dot_alpha(theta)
    evals, vecs = mx.jacobi_eigen(h)
    e2_minus = (evals[0] + evals[1]) / 2
    e2_plus = (evals[2] + evals[3]) / 2
    base = _p2(p)
    chirality = {"+1": "+|theta|", "-1": "-|theta|"}
    if np.any(theta):
        t = mx.chain(theta)
        g5 = mx.gamma5()
        top = t @ vecs[:, 3]
        label = float(np.real(np.vdot(top, g5 @ top)))
        if label < 0:
            chirality = {"+1": "-|theta|", "-1": "+|theta|"}
    return SpectrumResult(
        m_plus=_root(e2_plus - base),
        m_minus=_root(e2_minus - base),
        energies=(_root(e2_plus), _root(e2_minus)),
        tachyonic=bool(e2_minus - base < 0),
        chirality=chirality,
        method="jacobi eigensolver",
    )


def verify_spectrum(n=100, seed=0, tol=1e-10) -> Report:
    """Closed-form dispersion against the eigensolver route on random inputs."""
    rng = np.random.default_rng(seed)
    numeric = []
    for _ in range(n):
        p = rng.uniform(-2.0, 2.0, size=3)
        theta = rng.uniform(-2.0, 2.0, size=3)
        m_sq = _norm(theta) + rng.uniform(0.1, 4.0)
        a = dispersion(p, m_sq, theta)
        b = spectrum_via_eigen(p, m_sq, theta)
        diff = max(abs(a.energies[0] - b.energies[0]), abs(a.energies[1] - b.energies[1]))
        numeric.append(((*p, m_sq, *theta), diff))
    return Report.from_residuals(
        "dirac_spectrum",
        None,
        numeric,
        tol,
        paper_ref="E^2 = p^2 + m^2 +- |theta|, m_pm = sqrt(m^2 +- |theta|)",
        details={"samples": n},
    )

