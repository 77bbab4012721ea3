from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .expr import Const, Expr, to_string


def jsonable(value):
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if hasattr(value, "tolist"):
        return jsonable(value.tolist())
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, Expr):
        return to_string(value)
    return value


@dataclass
class Report:
    """Outcome of one verification.

    ``passed`` holds iff the symbolic residual is the literal 0 (when there
    is one) and every numeric residual is within ``tolerance``.
    """

    name: str
    passed: bool
    residual_symbolic: Expr | None = None
    residuals_numeric: list = field(default_factory=list)
    tolerance: float = 0.0
    paper_ref: str = ""
    details: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_residuals(cls, name, symbolic=None, numeric=(), tolerance=0.0, **kw):
        numeric = [(tuple(float(x) for x in pt), float(v)) for pt, v in numeric]
        ok = symbolic is None or symbolic == Const(0)
        ok = ok and all(v <= tolerance for _, v in numeric)
        return cls(name, ok, symbolic, numeric, tolerance, **kw)

    @property
    def max_numeric(self) -> float:
        return max((v for _, v in self.residuals_numeric), default=0.0)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": bool(self.passed),
            "residual_symbolic": "" if self.residual_symbolic is None else to_string(self.residual_symbolic),
            "residuals_numeric": [
                {"point": list(pt), "value": v} for pt, v in self.residuals_numeric
            ],
            "tolerance": self.tolerance,
            "paper_ref": self.paper_ref,
            "details": jsonable(self.details),
        }

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" max|r|={self.max_numeric:.3e} tol={self.tolerance:g}" if self.residuals_numeric else ""
        return f"[{status}] {self.name}{extra}"
