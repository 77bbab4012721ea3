import json

import pytest

from onshell_cas.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_deriv_whole_with_value(capsys):
    code, out, _ = run(capsys, "deriv", "--expr", "E*p_x", "--var", "p_x", "--whole", "--m", "4", "--at", "1,2,2")
    assert code == 0
    assert "d^/dp_x (E*p_x) = E + p_x^2/E" in out
    assert "value = 5.2" in out


def test_deriv_json(capsys):
    code, out, _ = run(capsys, "deriv", "--expr", "E", "--var", "p_x", "--whole", "--m", "4", "--at", "1,2,2", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["result"] == "p_x/E"
    assert payload["value"][0] == pytest.approx(0.2, abs=1e-15)


def test_commutator_coefficient(capsys):
    code, out, _ = run(capsys, "commutator", "--var", "p_x", "--var", "E", "--whole")
    assert code == 0
    assert "p_x" in out and "E^2" in out


def test_commutator_needs_two_vars(capsys):
    code, _, err = run(capsys, "commutator", "--var", "p_x")
    assert code == 2 and "two" in err


def test_nc_expand(capsys):
    code, out, _ = run(capsys, "nc-expand")
    assert code == 0
    assert out.strip() == "-p_x^2 - p_y^2 - p_z^2 + E^2 - m^2 - alpha_x*theta_x - alpha_y*theta_y - alpha_z*theta_z"
    code, out, _ = run(capsys, "nc-expand", "--no-theta", "--feynman")
    assert out.strip().endswith("+ Sigma_x*B_x + Sigma_y*B_y + Sigma_z*B_z")


def test_nc_expand_json_terms(capsys):
    code, out, _ = run(capsys, "nc-expand", "--format", "json", "--theta", "0,0,1")
    payload = json.loads(out)
    constant = [t for t in payload["terms"] if t["word"] == []]
    assert constant == [{"word": [], "coefficient": {"alpha_z": [-1.0, 0.0]}}]


def test_dirac_spectrum(capsys):
    code, out, _ = run(capsys, "dirac-spectrum", "--m2", "2", "--theta", "0,0,1")
    assert code == 0
    assert "1.73205080757" in out and "jacobi eigensolver" in out


def test_dirac_spectrum_tachyonic_json(capsys):
    code, out, _ = run(capsys, "dirac-spectrum", "--m2", "1", "--theta", "0,0,2", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["results"][0]["tachyonic"] is True


def test_helicity_and_ansatz(capsys):
    code, out, _ = run(capsys, "helicity", "--p", "1,2,2", "--m", "4", "--lambda", "0t")
    assert code == 0 and "eps_mu = (1.25, -0.25, -0.5, -0.5)" in out
    code, out, _ = run(capsys, "ansatz", "--p", "0,0,1", "--m", "1")
    assert code == 0 and "omega = 0-0.5i" in out


def test_verify_all_is_deterministic(capsys):
    code, first, _ = run(capsys, "verify", "--all", "--format", "json")
    assert code == 0
    payload = json.loads(first)
    assert payload["passed"] and len(payload["reports"]) == 15
    _, second, _ = run(capsys, "verify", "--all", "--format", "json")
    assert first == second


def test_verify_failure_exit_code(capsys):
    code, out, _ = run(capsys, "verify", "unitary_chain", "--tol", "1e-30")
    assert code == 1 and "FAIL" in out


def test_usage_errors(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "verify")[0] == 2
    assert run(capsys, "verify", "nonsense")[0] == 2
    assert run(capsys, "helicity", "--p", "1,2", "--m", "1")[0] == 2
    assert run(capsys, "deriv", "--expr", "E", "--var", "p_x", "--at", "1,2,2")[0] == 2


def test_parse_error_reports_span(capsys):
    code, _, err = run(capsys, "deriv", "--expr", "p_x + * 2", "--var", "p_x", "--format", "json")
    assert code == 2
    payload = json.loads(err)["error"]
    assert payload["type"] == "ParseError" and len(payload["span"]) == 2


def test_numeric_error(capsys):
    code, _, err = run(capsys, "ansatz", "--p", "0,0,0", "--m", "1")
    assert code == 3
