"""Symbolic and numeric tools for on-shell whole-partial derivatives,
noncommutative energy-momentum algebra and the resulting Dirac mass
splitting."""
from . import calculus, dirac, helicity, matrixalg, ncalg, oracle
from .errors import *  # noqa: F401,F403
from .expr import diff, eval_complex, parse, simplify, substitute, to_string
from .report import Report

__version__ = "0.1.0"
