"""Command-line front end.

Exit codes: 0 all checks passed, 1 a verification failed, 2 usage or parse
error, 3 numeric error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import calculus, dirac, helicity, matrixalg, ncalg
from .errors import NumericError, OnshellError, ParseError, UnboundSymbol
from .expr import eval_complex, parse, to_string
from .report import jsonable

DEFAULT_SEED = 0xD1AC

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# argument types -------------------------------------------------------------


def _vector(text):
    try:
        parts = [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a,b,c, got {text!r}") from None
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected three components, got {text!r}")
    return np.array(parts)


def _sign(text):
    table = {"+": 1, "+1": 1, "1": 1, "-": -1, "-1": -1}
    if text not in table:
        raise argparse.ArgumentTypeError(f"expected + or -, got {text!r}")
    return table[text]


def _planewave(text):
    return "auto" if text == "auto" else _sign(text)


def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--tol", type=float, default=None, help="override verification tolerance")
    p.add_argument("--branch", type=_sign, default=1, help="energy branch + or -")
    p.add_argument("--feynman", action="store_true", help="[p_i, p_j] = i eps_ijk B_k")
    p.add_argument("--planewave", type=_planewave, default="auto", help="+, - or auto")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="onshell-cas", description="On-shell calculus and noncommutative Dirac toolkit.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    v = sub.add_parser("verify", parents=[common], help="run verification reports")
    v.add_argument("--all", action="store_true", help="run every report")
    v.add_argument("names", nargs="*", help=f"subset of: {', '.join(VERIFY_NAMES)}")

    d = sub.add_parser("deriv", parents=[common], help="(whole) partial derivative")
    d.add_argument("--expr", required=True)
    d.add_argument("--var", required=True)
    d.add_argument("--whole", action="store_true")
    d.add_argument("--m", type=float, default=None)
    d.add_argument("--at", type=_vector, default=None, help="momentum p_x,p_y,p_z")

    c = sub.add_parser("commutator", parents=[common], help="commutator of two derivatives on an expression")
    c.add_argument("--expr", default="f(p_x,p_y,p_z,E)")
    c.add_argument("--var", action="append", required=True, help="give twice")
    c.add_argument("--whole", action="store_true")
    c.add_argument("--m", type=float, default=None)
    c.add_argument("--at", type=_vector, default=None)

    n = sub.add_parser("nc-expand", parents=[common], help="normal-ordered Dirac product")
    n.add_argument("--no-theta", action="store_true", help="drop [E, p_i] = theta_i")
    n.add_argument("--theta", type=_vector, default=None, help="substitute numeric theta")

    s = sub.add_parser("dirac-spectrum", parents=[common], help="mass splitting and dispersion")
    s.add_argument("--m2", type=float, required=True)
    s.add_argument("--theta", type=_vector, required=True)
    s.add_argument("--p", type=_vector, default=np.zeros(3))

    h = sub.add_parser("helicity", parents=[common], help="polarization vector, fields and parity")
    h.add_argument("--p", type=_vector, required=True)
    h.add_argument("--m", type=float, required=True)
    h.add_argument("--lambda", dest="lam", default="+1", choices=("+1", "-1", "0", "0t", "1"))

    a = sub.add_parser("ansatz", parents=[common], help="p/E^2 against the longitudinal field")
    a.add_argument("--p", type=_vector, required=True)
    a.add_argument("--m", type=float, required=True)
    return parser


# verify -----------------------------------------------------------------------

VERIFY_NAMES = (
    "whole_commutator",
    "momentum_commutator",
    "dirac_product",
    "clifford",
    "unitary_chain",
    "dirac_spectrum",
    "parity",
    "longitudinal_ansatz",
)


def _tol(args, default):
    return default if args.tol is None else args.tol


def _reports(name, args):
    c = calculus.on_shell(branch=args.branch)
    rng = np.random.default_rng(args.seed)
    if name == "whole_commutator":
        return [
            calculus.verify_whole_commutator(axis=ax, constraint=c, seed=args.seed, tol=_tol(args, 1e-4))
            for ax in "xyz"
        ]
    if name == "momentum_commutator":
        return [
            calculus.verify_momentum_commutator(axis_i=i, axis_j=j, constraint=c, seed=args.seed, tol=_tol(args, 1e-6))
            for i, j in (("x", "y"), ("x", "z"), ("y", "z"))
        ]
    if name == "dirac_product":
        return [ncalg.verify_dirac_product(ncalg.CommutationTable(feynman=args.feynman))]
    if name == "clifford":
        return [matrixalg.verify_clifford()]
    if name == "unitary_chain":
        return [matrixalg.verify_chain(seed=args.seed, tol=_tol(args, 1e-12))]
    if name == "dirac_spectrum":
        return [dirac.verify_spectrum(seed=args.seed, tol=_tol(args, 1e-10))]
    if name == "parity":
        p, m = rng.uniform(-2, 2, size=3), rng.uniform(0.5, 2)
        return [helicity.verify_parity(p, m, lam, tol=_tol(args, 1e-10)) for lam in helicity.HELICITIES]
    if name == "longitudinal_ansatz":
        rng.uniform(size=4)
        p, m = rng.uniform(-2, 2, size=3), rng.uniform(0.5, 2)
        return [helicity.verify_longitudinal_ansatz(p, m, tol=_tol(args, 1e-12))]
    raise UsageError(f"unknown verification {name!r}")


def cmd_verify(args, out):
    names = list(VERIFY_NAMES) if args.all else args.names
    if not names:
        raise UsageError("verify needs --all or at least one name")
    reports = [r for name in names for r in _reports(name, args)]
    ok = all(r.passed for r in reports)
    if args.format == "json":
        out.json({"passed": ok, "reports": [r.to_dict() for r in reports]})
    else:
        for r in reports:
            out.status(r.passed, r.summary())
        out.line(f"{sum(r.passed for r in reports)}/{len(reports)} passed")
    return EXIT_OK if ok else EXIT_FAIL


# computations -------------------------------------------------------------------


def _env(args):
    if args.at is None:
        return None
    if args.m is None:
        raise UsageError("--at needs --m to put E on the shell")
    p = args.at
    env = {"p_x": p[0], "p_y": p[1], "p_z": p[2], "m": args.m}
    env["E"] = args.branch * float(np.sqrt(p @ p + args.m**2))
    return env


def _op(var, args, c):
    if args.whole:
        return calculus.DiffOp.whole(var, c)
    return calculus.DiffOp.plain(var)


def _complex_json(z):
    z = complex(z)
    return [z.real, z.imag]


def _fmt_complex(z):
    z = complex(z)
    if z.imag == 0:
        return f"{z.real:.12g}"
    return f"{z.real:.12g}{z.imag:+.12g}i"


def _emit_value(args, out, label, expr, env):
    value = None
    if env is not None:
        try:
            value = eval_complex(expr, env)
        except UnboundSymbol as exc:
            raise UsageError(f"cannot evaluate: {exc}") from exc
    if args.format == "json":
        payload = {"operation": label, "result": to_string(expr)}
        if value is not None:
            payload["at"] = {k: env[k] for k in ("p_x", "p_y", "p_z", "E", "m")}
            payload["value"] = _complex_json(value)
        out.json(payload)
    else:
        out.line(f"{label} = {to_string(expr)}")
        if value is not None:
            out.line(f"value = {_fmt_complex(value)}")
    return EXIT_OK


def cmd_deriv(args, out):
    e = parse(args.expr)
    c = calculus.on_shell(branch=args.branch)
    result = _op(args.var, args, c)(e)
    label = f"{'d^' if args.whole else 'd'}/d{args.var} ({to_string(e)})"
    return _emit_value(args, out, label, result, _env(args))


def cmd_commutator(args, out):
    if len(args.var) != 2:
        raise UsageError("commutator needs exactly two --var")
    e = parse(args.expr)
    c = calculus.on_shell(branch=args.branch)
    a, b = (_op(v, args, c) for v in args.var)
    result = calculus.commutator_action(a, b, e)
    hat = "d^" if args.whole else "d"
    label = f"[{hat}/d{args.var[0]}, {hat}/d{args.var[1]}] ({to_string(e)})"
    return _emit_value(args, out, label, result, _env(args))


def cmd_nc_expand(args, out):
    table = ncalg.CommutationTable(theta=not args.no_theta, feynman=args.feynman)
    poly = ncalg.expand_dirac_product(table)
    if args.theta is not None:
        poly = ncalg.substitute_central(poly, dict(zip(("theta_x", "theta_y", "theta_z"), args.theta)))
    if args.format == "json":
        terms = [
            {
                "word": [[g, k] for g, k in ncalg.compress(w)],
                "coefficient": {name: _complex_json(c) for name, c in parts},
            }
            for w, parts in ncalg.ncpoly_items(poly)
        ]
        out.json({"table": {"theta": table.theta, "feynman": table.feynman}, "result": ncalg.format_ncpoly(poly), "terms": terms})
    else:
        out.line(ncalg.format_ncpoly(poly))
    return EXIT_OK


def cmd_dirac_spectrum(args, out):
    closed = dirac.dispersion(args.p, args.m2, args.theta)
    rows = [closed]
    agree = True
    if not closed.tachyonic:
        eig = dirac.spectrum_via_eigen(args.p, args.m2, args.theta)
        rows.append(eig)
        tol = _tol(args, 1e-10)
        agree = all(abs(x - y) <= tol for x, y in zip(closed.energies, eig.energies))
    if args.format == "json":
        out.json({"results": [r.to_dict() for r in rows], "agree": agree})
    else:
        out.line(f"{'method':<20} {'m_plus':>14} {'m_minus':>14} {'E_plus':>14} {'E_minus':>14}  tachyonic")
        for r in rows:
            cells = [_fmt_complex(z) for z in (r.m_plus, r.m_minus, *r.energies)]
            out.line(f"{r.method:<20} " + " ".join(f"{c:>14}" for c in cells) + f"  {r.tachyonic}")
        out.line("chirality: gamma5=+1 -> " + rows[-1].chirality["+1"] + ", gamma5=-1 -> " + rows[-1].chirality["-1"])
    return EXIT_OK if agree else EXIT_FAIL


def cmd_helicity(args, out):
    lam = "+1" if args.lam == "1" else args.lam
    sign = None if args.planewave == "auto" else args.planewave
    state = helicity.pol_state(args.p, args.m, lam, sign)
    parity = helicity.verify_parity(args.p, args.m, lam, tol=_tol(args, 1e-10))
    trans = helicity.transversality(args.p, args.m, lam)
    if args.format == "json":
        out.json(
            {
                "lambda": lam,
                "eps_lower": [_complex_json(z) for z in state.eps],
                "E_field": [_complex_json(z) for z in state.E_field],
                "B_field": [_complex_json(z) for z in state.B_field],
                "planewave_sign": state.convention,
                "transversality": _complex_json(trans),
                "parity": parity.to_dict(),
            }
        )
    else:
        vec = lambda v: "(" + ", ".join(_fmt_complex(z) for z in v) + ")"  # noqa: E731
        out.line(f"lambda = {lam}")
        out.line(f"eps_mu = {vec(state.eps)}")
        out.line(f"E = {vec(state.E_field)}")
        out.line(f"B = {vec(state.B_field)}")
        out.line(f"p^mu eps_mu = {_fmt_complex(trans)}")
        out.status(parity.passed, parity.summary())
        if parity.passed:
            out.line(f"parity: lambda' = {parity.details['lambda_prime']}, eta = {_fmt_complex(parity.details['eta'])}")
    return EXIT_OK if parity.passed else EXIT_FAIL


def cmd_ansatz(args, out):
    report = helicity.verify_longitudinal_ansatz(args.p, args.m, tol=_tol(args, 1e-12))
    if args.format == "json":
        out.json(report.to_dict())
    else:
        d = report.details
        out.line("c = (" + ", ".join(f"{x:.12g}" for x in d["c"]) + ")")
        out.line(f"omega = {_fmt_complex(d['omega'])}")
        out.status(report.passed, report.summary())
    return EXIT_OK if report.passed else EXIT_FAIL


COMMANDS = {
    "verify": cmd_verify,
    "deriv": cmd_deriv,
    "commutator": cmd_commutator,
    "nc-expand": cmd_nc_expand,
    "dirac-spectrum": cmd_dirac_spectrum,
    "helicity": cmd_helicity,
    "ansatz": cmd_ansatz,
}


# output ---------------------------------------------------------------------------


class Output:
    def __init__(self, stream, color):
        self.stream = stream
        self.color = color

    def line(self, text):
        print(text, file=self.stream)

    def status(self, ok, text):
        if self.color:
            code = "32" if ok else "31"
            text = f"\x1b[{code}m{text}\x1b[0m"
        self.line(text)

    def json(self, payload):
        print(json.dumps(jsonable(payload), indent=2), file=self.stream)


def _error(fmt, code, exc, stream):
    kind = type(exc).__name__
    if fmt == "json":
        payload = {"error": {"code": code, "type": kind, "message": str(exc)}}
        if isinstance(exc, ParseError):
            payload["error"]["span"] = [exc.span.start, exc.span.end]
        print(json.dumps(payload), file=stream)
    else:
        print(f"error ({kind}): {exc}", file=stream)
    return code


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    fmt = "json" if "json" in argv and "--format" in argv else "text"
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("missing subcommand")
        color = args.format == "text" and "NO_COLOR" not in os.environ and sys.stdout.isatty()
        return COMMANDS[args.command](args, Output(sys.stdout, color))
    except (UsageError, ParseError) as exc:
        return _error(fmt, EXIT_USAGE, exc, sys.stderr)
    except (NumericError, ArithmeticError) as exc:
        return _error(fmt, EXIT_NUMERIC, exc, sys.stderr)
    except (OnshellError, ValueError) as exc:
        return _error(fmt, EXIT_USAGE, exc, sys.stderr)
