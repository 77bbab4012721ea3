import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from onshell_cas import oracle
from onshell_cas.errors import NumericPole
from onshell_cas.oracle import TestFunc

P = np.array([1.0, 2.0, 2.0])
M = 4.0


def energy(*a):
    return a[3]


def test_whole_diff_examples():
    assert oracle.numeric_whole_diff(energy, "x", P, M) == pytest.approx(0.2, abs=1e-8)
    assert abs(oracle.numeric_whole_diff(lambda *a: 3.0, "y", P, M)) <= 1e-12
    assert oracle.numeric_whole_diff(lambda a, b, c, e: a * e, "x", P, M) == pytest.approx(5.2, abs=1e-6)


def test_commutator_examples():
    assert oracle.numeric_commutator(energy, "x", P, M) == pytest.approx(0.04, abs=1e-4)
    assert abs(oracle.numeric_commutator(lambda a, b, c, e: b, "x", P, M)) <= 1e-6
    assert oracle.numeric_commutator(lambda *a: a[3] ** 2, "x", P, M) == pytest.approx(0.4, abs=1e-4)


def test_negative_branch():
    # E = -5 at the 3-4-5 point; dE/dp_x = p_x/E = -0.2
    assert oracle.numeric_whole_diff(energy, "x", P, M, branch=-1) == pytest.approx(-0.2, abs=1e-8)


def test_bad_step_and_pole():
    with pytest.raises(ValueError):
        oracle.numeric_whole_diff(energy, "x", P, M, h=0)
    with pytest.raises(NumericPole):
        oracle.numeric_whole_diff(energy, "x", np.zeros(3), 1e-6, h=1e-6)
    with pytest.raises(NumericPole):
        oracle.numeric_whole_diff(lambda *a: 1 / (float(a[0]) - float(a[0])), "x", P, M)


def test_unknown_axis():
    with pytest.raises(ValueError):
        oracle.axis_index("w")


def test_exp_sum_partials_match_differences():
    tf = oracle.generic_test_func()
    args = (0.3, -0.4, 0.8, 1.7)
    h = 1e-5
    for k in range(4):
        orders = [0, 0, 0, 0]
        orders[k] = 1
        up = list(args)
        dn = list(args)
        up[k] += h
        dn[k] -= h
        fd = (tf(*up) - tf(*dn)) / (2 * h)
        assert abs(tf.partial(tuple(orders), *args) - fd) <= 1e-9


def test_momentum_commutator_vanishes():
    tf = oracle.generic_test_func()
    assert abs(oracle.numeric_momentum_commutator(tf, "x", "y", P, M)) <= 1e-6


@settings(max_examples=40, deadline=None)
@given(
    p=st.lists(st.floats(-2.0, 2.0), min_size=3, max_size=3),
    m=st.floats(0.5, 3.0),
    axis=st.sampled_from(["x", "y", "z"]),
)
def test_second_order_convergence(p, m, axis):
    tf = oracle.generic_test_func()
    p = np.array(p)
    i = oracle.axis_index(axis)
    e = oracle.on_shell_energy(p, m)
    args = (*p, e)
    units = [[1 if k == j else 0 for k in range(4)] for j in range(4)]
    exact = tf.partial(tuple(units[i]), *args) + tf.partial(tuple(units[3]), *args) * p[i] / e
    ratio = oracle.convergence_ratio(tf, axis, p, m, exact, h=0.05)
    err = abs(oracle.numeric_whole_diff(tf, axis, p, m, h=0.05) - exact)
    if err < 1e-9:
        return  # truncation term vanishes at this point
    assert abs(ratio - 4.0) <= 0.5
