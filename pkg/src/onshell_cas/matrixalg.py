"""Small dense complex matrices: Pauli/Dirac constructors, the unitary
chain that brings ``alpha . theta`` to ``gamma5 |theta|``, and a cyclic
Jacobi eigensolver for Hermitian matrices.

Matrices are plain ``numpy`` complex arrays.  The constructors only ever
produce entries in {0, +-1, +-i}, so products and sums of them are exact in
double precision.

Why the 4x4 lift is ``diag(U1, U1)``: with ``alpha_i = diag(sigma_i, -sigma_i)``
we have ``alpha . n = diag(sigma . n, -sigma . n)``; conjugating both blocks
by the same ``U1`` gives ``diag(sigma_3, -sigma_3) = diag(1, -1, -1, 1) = alpha_3``.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import NotHermitian, NotUnitary
from .report import Report

_SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)
Z2 = np.zeros((2, 2), dtype=complex)

UNITARY_TOL = 1e-12


def _index(i) -> int:
    if i not in (1, 2, 3):
        raise IndexError(f"index must be 1, 2 or 3, got {i!r}")
    return i - 1


def pauli(i) -> np.ndarray:
    return _SIGMA[_index(i)].copy()


def alpha(i) -> np.ndarray:
    s = pauli(i)
    return np.block([[s, Z2], [Z2, -s]])


def beta() -> np.ndarray:
    return np.block([[Z2, I2], [I2, Z2]])


def gamma5() -> np.ndarray:
    return np.diag([1, 1, -1, -1]).astype(complex)


def spin(k) -> np.ndarray:
    """``Sigma_k = diag(sigma_k, sigma_k)``; ``alpha_i alpha_j = delta_ij + i eps_ijk Sigma_k``."""
    s = pauli(k)
    return np.block([[s, Z2], [Z2, s]])


def dot_alpha(v) -> np.ndarray:
    return sum(float(c) * alpha(k + 1) for k, c in enumerate(v))


def dot_sigma(v) -> np.ndarray:
    return sum(float(c) * pauli(k + 1) for k, c in enumerate(v))


def dagger(a) -> np.ndarray:
    return np.conj(a).T


def unit_vector(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    norm = float(np.linalg.norm(v))
    if norm == 0.0 or not np.isfinite(norm):
        raise ValueError("cannot normalize a zero or non-finite vector")
    return v / norm


def is_unitary(u, tol=UNITARY_TOL) -> bool:
    n = u.shape[0]
    return float(np.max(np.abs(dagger(u) @ u - np.eye(n)))) <= tol


def verify_clifford(alphas=None, beta_matrix=None) -> Report:
    """beta^2 = 1, {alpha_i, beta} = 0, {alpha_i, alpha_j} = 2 delta_ij (exact)."""
    a = list(alphas) if alphas is not None else [alpha(i) for i in (1, 2, 3)]
    b = beta_matrix if beta_matrix is not None else beta()
    checks = {"beta^2 = 1": b @ b - I4}
    for i in range(3):
        checks[f"{{alpha_{i + 1}, beta}} = 0"] = a[i] @ b + b @ a[i]
    for i in range(3):
        for j in range(3):
            target = 2 * I4 if i == j else 0 * I4
            checks[f"{{alpha_{i + 1}, alpha_{j + 1}}} = {2 if i == j else 0}"] = (
                a[i] @ a[j] + a[j] @ a[i] - target
            )
    failed = [name for name, r in checks.items() if np.any(r != 0)]
    return Report(
        "clifford",
        not failed,
        None,
        [],
        0.0,
        paper_ref="beta^2 = 1, alpha^i beta + beta alpha^i = 0, {alpha^i, alpha^j} = 2 delta^ij",
        details={"relations": len(checks), "failed": failed},
    )


def u1_for(n) -> np.ndarray:
    """Unitary ``U`` with ``U (sigma . n) U^dagger = sigma_3`` for a unit ``n``.

    Rows are the conjugated eigenvectors of ``sigma . n``; at the poles the
    azimuth is taken as 0, so ``n = z`` gives the identity.
    """
    n = unit_vector(n)
    perp = math.hypot(n[0], n[1])
    # the smaller half-angle factor comes from perp = 2 sin cos, which keeps
    # it accurate near the poles
    if n[2] >= 0:
        cos_half = math.sqrt((1.0 + n[2]) / 2.0)
        sin_half = perp / (2.0 * cos_half)
    else:
        sin_half = math.sqrt((1.0 - n[2]) / 2.0)
        cos_half = perp / (2.0 * sin_half)
    phase = complex(n[0], n[1]) / perp if perp > 0.0 else 1.0
    u = np.array(
        [[cos_half, phase.conjugate() * sin_half], [-phase * sin_half, cos_half]],
        dtype=complex,
    )

    def residual(w):
        return float(np.max(np.abs(w @ dot_sigma(n) @ dagger(w) - _SIGMA[2])))

    if residual(u) > UNITARY_TOL:
        # opposite orientation; not expected for the rows chosen above
        flipped = _SIGMA[0] @ u
        if residual(flipped) < residual(u):
            u = flipped
    return u


def u1_lift4(u1) -> np.ndarray:
    u1 = np.asarray(u1, dtype=complex)
    if u1.shape != (2, 2) or not is_unitary(u1):
        raise NotUnitary("U1 must be a 2x2 unitary matrix")
    return np.block([[u1, Z2], [Z2, u1]])


def u2() -> np.ndarray:
    """Permutation swapping basis vectors 2 and 4."""
    return np.array(
        [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]],
        dtype=complex,
    )


def chain(theta) -> np.ndarray:
    """``T = U2 diag(U1, U1)`` with ``T (alpha . theta) T^dagger = gamma5 |theta|``."""
    return u2() @ u1_lift4(u1_for(theta))


def jacobi_eigen(h, tol=1e-13, max_sweeps=50):
    """Cyclic Jacobi for Hermitian ``h``.

    Returns ``(eigenvalues, V)`` with eigenvalues ascending and
    ``V^dagger h V`` diagonal.
    """
    a = np.array(h, dtype=complex)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    if float(np.max(np.abs(a - dagger(a)), initial=0.0)) > 1e-12:
        raise NotHermitian("jacobi_eigen needs a Hermitian matrix")
    a = (a + dagger(a)) / 2
    v = np.eye(n, dtype=complex)
    scale = float(np.linalg.norm(a)) or 1.0

    mask = ~np.eye(n, dtype=bool)

    def off(m):
        return float(np.linalg.norm(m[mask]))

    for _ in range(max_sweeps):
        if off(a) <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= 1e-300:
                    continue
                # phase-rotate so the pivot is real, then a real Jacobi rotation
                ph = apq / mag
                app, aqq = a[p, p].real, a[q, q].real
                tau = (aqq - app) / (2 * mag)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.sqrt(1 + tau * tau))
                c = 1 / math.sqrt(1 + t * t)
                s = t * c
                g = np.eye(n, dtype=complex)
                g[p, p] = c
                g[p, q] = s
                g[q, p] = -s * ph.conjugate()
                g[q, q] = c * ph.conjugate()
                a = dagger(g) @ a @ g
                a[p, q] = a[q, p] = 0.0
                v = v @ g
    evals = np.real(np.diag(a))
    order = np.argsort(evals, kind="stable")
    return evals[order], v[:, order]


def chain_residual(theta):
    """``(|T (alpha.theta) T^dagger - gamma5 |theta||_F, max unitarity defect)``."""
    theta = np.asarray(theta, dtype=float)
    u1 = u1_for(theta)
    lift = u1_lift4(u1)
    t = u2() @ lift
    r = t @ dot_alpha(theta) @ dagger(t) - gamma5() * float(np.linalg.norm(theta))
    defect = max(
        float(np.max(np.abs(dagger(u) @ u - np.eye(u.shape[0])))) for u in (u1, lift, u2(), t)
    )
    return float(np.linalg.norm(r)), defect


def verify_chain(n=100, seed=0, tol=1e-12) -> Report:
    """``U2 diag(U1, U1)`` takes ``alpha . theta`` to ``gamma5 |theta|`` for random ``theta``."""
    rng = np.random.default_rng(seed)
    numeric = []
    for _ in range(n):
        theta = rng.uniform(-5.0, 5.0, size=3)
        resid, defect = chain_residual(theta)
        numeric.append((tuple(theta), max(resid, defect)))
    return Report.from_residuals(
        "unitary_chain",
        None,
        numeric,
        tol,
        paper_ref="U2 U (alpha.theta) U^dagger U2^dagger = gamma5 |theta|",
        details={"samples": n},
    )
