from .nodes import (
    DEFAULT_SLOTS,
    ONE,
    ZERO,
    Add,
    Const,
    Expr,
    Func,
    I,
    ImagUnit,
    Mul,
    Partial,
    Pow,
    Symbol,
    as_expr,
    free_symbols,
    opaque_functions,
    partial,
    sqrt,
    symbols,
)
from .canon import is_zero, simplify
from .ops import diff, eval_complex, substitute
from .parse import SourceSpan, parse, parse_raw
from .printer import to_string
