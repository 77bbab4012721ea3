import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from onshell_cas import matrixalg as mx
from onshell_cas.errors import NotHermitian, NotUnitary

SQ2 = np.sqrt(2.0)


def test_pauli_product():
    assert np.array_equal(mx.pauli(1) @ mx.pauli(2), 1j * mx.pauli(3))


def test_alpha3_diagonal():
    assert np.array_equal(mx.alpha(3), np.diag([1, -1, -1, 1]))


def test_beta_squares_to_one():
    assert np.array_equal(mx.beta() @ mx.beta(), mx.I4)


def test_index_out_of_range():
    with pytest.raises(IndexError):
        mx.pauli(0)
    with pytest.raises(IndexError):
        mx.alpha(4)


def test_clifford_relations():
    r = mx.verify_clifford()
    assert r.passed
    assert r.details["relations"] == 13
    a1, a2 = mx.alpha(1), mx.alpha(2)
    assert not np.any(a1 @ a2 + a2 @ a1)


def test_clifford_negative_control():
    broken = mx.beta().copy()
    broken[0, 2] = -1
    r = mx.verify_clifford(beta_matrix=broken)
    assert not r.passed
    assert "beta^2 = 1" in r.details["failed"]


def test_spin_from_alpha_products():
    # alpha_i alpha_j = delta_ij + i eps_ijk Sigma_k
    assert np.array_equal(mx.alpha(1) @ mx.alpha(2), 1j * mx.spin(3))
    assert np.array_equal(mx.alpha(2) @ mx.alpha(3), 1j * mx.spin(1))


def _conj_residual(u, m, target):
    return float(np.max(np.abs(u @ m @ mx.dagger(u) - target)))


@pytest.mark.parametrize(
    "n",
    [(0, 0, 1), (1, 0, 0), (0, 0, -1), (0, 1, 0), (1e-9, 0, -1), (0, 1e-10, 1), (3, 4, 0), (-1, 2, -2)],
)
def test_u1_diagonalizes(n):
    u = mx.u1_for(n)
    assert mx.is_unitary(u)
    assert _conj_residual(u, mx.dot_sigma(mx.unit_vector(n)), mx.pauli(3)) <= 1e-12


def test_u1_examples():
    assert np.allclose(mx.u1_for((0, 0, 1)), mx.I2, atol=0)
    u = mx.u1_for((1, 0, 0))
    assert np.allclose(u, np.array([[1, 1], [-1, 1]]) / SQ2, atol=1e-15)
    assert _conj_residual(mx.u1_for((0, 0, -1)), -mx.pauli(3), mx.pauli(3)) <= 1e-12


def test_lift_examples():
    lift = mx.u1_lift4(mx.u1_for((0, 0, 1)))
    assert np.array_equal(lift @ mx.alpha(3) @ mx.dagger(lift), mx.alpha(3))
    lift = mx.u1_lift4(mx.u1_for((1, 0, 0)))
    assert _conj_residual(lift, mx.alpha(1), mx.alpha(3)) <= 1e-12
    theta = (3, 4, 0)
    lift = mx.u1_lift4(mx.u1_for(theta))
    evals, _ = mx.jacobi_eigen(lift @ mx.dot_alpha(theta) @ mx.dagger(lift))
    assert np.allclose(evals, [-5, -5, 5, 5], atol=1e-12)


def test_lift_rejects_non_unitary():
    with pytest.raises(NotUnitary):
        mx.u1_lift4(2 * mx.I2)


def test_u2():
    u = mx.u2()
    assert np.array_equal(u @ mx.alpha(3) @ mx.dagger(u), mx.gamma5())
    assert np.array_equal(u @ u, mx.I4)
    assert np.array_equal(mx.dagger(u) @ u, mx.I4)


def test_jacobi_examples():
    assert np.allclose(mx.jacobi_eigen(mx.gamma5())[0], [-1, -1, 1, 1], atol=0)
    assert np.allclose(mx.jacobi_eigen(mx.dot_alpha((3, 4, 0)))[0], [-5, -5, 5, 5], atol=1e-12)
    assert np.allclose(mx.jacobi_eigen(mx.pauli(1))[0], [-1, 1], atol=1e-15)


def test_jacobi_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        mx.jacobi_eigen(np.array([[0, 1], [0, 0]], dtype=complex))


def test_verify_chain():
    r = mx.verify_chain(n=100, seed=5)
    assert r.passed and r.max_numeric <= 1e-12


vectors = st.lists(st.floats(-10, 10), min_size=3, max_size=3).filter(lambda v: np.linalg.norm(v) > 1e-3)


@settings(max_examples=100, deadline=None)
@given(theta=vectors)
def test_chain_to_gamma5(theta):
    resid, defect = mx.chain_residual(theta)
    assert resid <= 1e-12 * max(1.0, np.linalg.norm(theta))
    assert defect <= 1e-12


@settings(max_examples=100, deadline=None)
@given(theta=vectors)
def test_eigen_of_alpha_dot_theta(theta):
    t = np.linalg.norm(theta)
    evals, _ = mx.jacobi_eigen(mx.dot_alpha(theta))
    assert np.allclose(evals, [-t, -t, t, t], atol=1e-10, rtol=0)


def _random_hermitian(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (a + mx.dagger(a)) / 2


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.sampled_from([2, 3, 4]))
def test_jacobi_postconditions(seed, n):
    rng = np.random.default_rng(seed)
    h = _random_hermitian(rng, n)
    evals, v = mx.jacobi_eigen(h)
    assert list(evals) == sorted(evals)
    d = mx.dagger(v) @ h @ v
    off = d - np.diag(np.diag(d))
    assert np.linalg.norm(off) <= 1e-12 * np.linalg.norm(h)
    assert mx.is_unitary(v, 1e-12)
    # independent oracle: characteristic-polynomial roots via numpy
    ref = np.sort(np.roots(np.poly(h)).real)
    assert np.allclose(evals, ref, atol=1e-8)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_spectrum_invariant_under_conjugation(seed):
    rng = np.random.default_rng(seed)
    h = _random_hermitian(rng, 4)
    theta = rng.normal(size=3)
    t = mx.chain(theta)
    a, _ = mx.jacobi_eigen(h)
    b, _ = mx.jacobi_eigen(t @ h @ mx.dagger(t))
    assert np.allclose(a, b, atol=1e-10)
