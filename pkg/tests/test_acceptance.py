"""Acceptance criteria. Run with ``pytest -s tests/test_acceptance.py`` to see
one PASS/FAIL line per criterion."""
import math
import random
import time

import numpy as np

from exprgen import random_expr
from onshell_cas import calculus, dirac, helicity, matrixalg, ncalg, oracle
from onshell_cas.errors import DegenerateExpression
from onshell_cas.expr import ZERO, Func, parse, simplify, to_string

BUDGET_S = 10.0


def _record(label, ok, detail, started):
    elapsed = time.perf_counter() - started
    ok = ok and elapsed < BUDGET_S
    print(f"\n{'PASS' if ok else 'FAIL'} {label}: {detail} ({elapsed:.2f}s)")
    assert ok, detail


def _momenta(n, seed, lo=0.1, hi=10.0):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        d = rng.normal(size=3)
        d /= np.linalg.norm(d)
        out.append((d * rng.uniform(lo, hi), rng.uniform(0.1, 10.0)))
    return out


def test_01_whole_commutator():
    t0 = time.perf_counter()
    reports = [calculus.verify_whole_commutator(axis=ax, n_points=20, seed=1, tol=1e-4) for ax in "xyz"]
    symbolic_zero = all(r.residual_symbolic == ZERO for r in reports)
    worst = max(r.max_numeric for r in reports)
    ok = symbolic_zero and all(r.passed for r in reports) and all(len(r.residuals_numeric) == 20 for r in reports)
    _record("whole commutator", ok, f"symbolic 0 on x,y,z; max numeric {worst:.2e} <= 1e-4", t0)


def test_02_momentum_commutator():
    t0 = time.perf_counter()
    c = calculus.on_shell()
    f = Func("f")
    residuals = []
    for a, b in (("p_x", "p_y"), ("p_x", "p_z"), ("p_y", "p_z")):
        residuals.append(calculus.commutator_action(calculus.DiffOp.whole(a, c), calculus.DiffOp.whole(b, c), f))
    ok = all(r == ZERO for r in residuals)
    _record("momentum commutator", ok, "literal 0 for all three pairs", t0)


def test_03_clifford():
    t0 = time.perf_counter()
    r = matrixalg.verify_clifford()
    ok = r.passed and r.details["relations"] == 13 and not r.details["failed"]
    _record("Clifford relations", ok, f"{r.details['relations']} relations exact", t0)


def test_04_dirac_product():
    t0 = time.perf_counter()
    product = ncalg.expand_dirac_product(ncalg.CommutationTable())
    diff = product - ncalg.dispersion_target()
    ok = diff.is_zero() and ncalg.verify_dirac_product().passed
    _record("Dirac product", ok, ncalg.format_ncpoly(product), t0)


def test_05_unitary_chain():
    t0 = time.perf_counter()
    rng = np.random.default_rng(5)
    worst_resid = worst_defect = 0.0
    for _ in range(100):
        theta = rng.uniform(-5.0, 5.0, size=3)
        resid, defect = matrixalg.chain_residual(theta)
        worst_resid, worst_defect = max(worst_resid, resid), max(worst_defect, defect)
    ok = worst_resid <= 1e-12 and worst_defect <= 1e-12
    _record("unitary chain", ok, f"max residual {worst_resid:.2e}, max unitarity defect {worst_defect:.2e}", t0)


def test_06_dispersion():
    t0 = time.perf_counter()
    rng = np.random.default_rng(6)
    worst = 0.0
    for _ in range(100):
        p = rng.uniform(-2, 2, size=3)
        theta = rng.uniform(-2, 2, size=3)
        m_sq = float(np.linalg.norm(theta)) + rng.uniform(0.1, 4.0)
        a = dirac.dispersion(p, m_sq, theta)
        b = dirac.spectrum_via_eigen(p, m_sq, theta)
        worst = max(worst, *(abs(x - y) for x, y in zip(a.energies, b.energies)))
    classic = all(
        dirac.dispersion(p, m_sq, (0, 0, 0)).energies == (math.sqrt(float(p @ p) + m_sq),) * 2
        for p, m_sq in ((rng.uniform(-3, 3, size=3), rng.uniform(0, 5)) for _ in range(50))
    )
    threshold = (
        not dirac.mass_split(2.0, (0, 0, 2.0)).tachyonic
        and dirac.mass_split(2.0, (0, 0, np.nextafter(2.0, 3.0))).tachyonic
        and dirac.mass_split(2.0, (0, 0, np.nextafter(2.0, 1.0))).m_minus.real > 0
    )
    ok = worst <= 1e-10 and classic and threshold
    _record("dispersion", ok, f"eigen route max {worst:.2e}; theta=0 exact {classic}; threshold exact {threshold}", t0)


def test_07_helicity_fields():
    t0 = time.perf_counter()
    worst_t = worst_b = worst_f = 0.0
    for p, m in _momenta(1000, 7):
        for lam in (1, -1, 0):
            worst_t = max(worst_t, abs(helicity.transversality(p, m, lam)))
            e, _ = helicity.fields_closed_form(p, m, lam)
            phase, resid = helicity.field_phase(p, m, lam)
            worst_f = max(worst_f, resid / max(1.0, np.linalg.norm(e)), abs(phase - helicity.FIELD_PHASES[lam]))
        _, b0 = helicity.fields_closed_form(p, m, 0)
        _, b0_derived = helicity.fields_from_potential(p, m, 0)
        worst_b = max(worst_b, float(np.linalg.norm(b0)), float(np.linalg.norm(b0_derived)))
    ok = worst_t <= 1e-12 and worst_b <= 1e-12 and worst_f <= 1e-9
    _record(
        "helicity fields",
        ok,
        f"transversality {worst_t:.2e}, B(0) {worst_b:.2e}, frozen phase {worst_f:.2e}",
        t0,
    )


def test_08_longitudinal_ansatz():
    t0 = time.perf_counter()
    worst_par = worst_omega = 0.0
    for p, m in _momenta(1000, 8):
        c, omega = calculus.ansatz_coefficient(p, m)
        worst_par = max(worst_par, calculus.parallel_residual(p, m))
        frozen = calculus.omega_closed_form(p, m)
        worst_omega = max(worst_omega, abs(omega - frozen) / abs(frozen))
    ok = worst_par <= 1e-12 and worst_omega <= 1e-12
    _record("longitudinal ansatz", ok, f"parallel {worst_par:.2e}, omega {worst_omega:.2e}", t0)


def test_09_infrastructure():
    t0 = time.perf_counter()
    rng = random.Random(9)
    checked = mismatched = not_idempotent = 0
    while checked < 1000:
        try:
            s = simplify(random_expr(rng))
        except DegenerateExpression:
            continue
        checked += 1
        if parse(to_string(s)) != s:
            mismatched += 1
        if simplify(s) != s:
            not_idempotent += 1

    tf = oracle.generic_test_func()
    prng = np.random.default_rng(9)
    ratios = []
    while len(ratios) < 20:
        p, m = prng.uniform(-2, 2, size=3), prng.uniform(0.5, 3.0)
        e = oracle.on_shell_energy(p, m)
        exact = tf.partial((1, 0, 0, 0), *p, e) + tf.partial((0, 0, 0, 1), *p, e) * p[0] / e
        if abs(oracle.numeric_whole_diff(tf, "x", p, m, h=0.05) - exact) < 1e-9:
            continue
        ratios.append(oracle.convergence_ratio(tf, "x", p, m, exact, h=0.05))
    worst_ratio = max(ratios, key=lambda r: abs(r - 4.0))
    ok = mismatched == 0 and not_idempotent == 0 and abs(worst_ratio - 4.0) <= 0.5
    _record(
        "infrastructure",
        ok,
        f"{checked} round-trips ({mismatched} mismatched), {not_idempotent} non-idempotent, "
        f"worst convergence ratio {worst_ratio:.3f}",
        t0,
    )


def test_product_carries_minus_alpha_theta():
    plus_target = ncalg.dispersion_target(theta=False) * 2 - ncalg.dispersion_target()
    assert not (ncalg.expand_dirac_product() - plus_target).is_zero()
