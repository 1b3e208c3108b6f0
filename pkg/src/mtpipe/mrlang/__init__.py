"""Machine-readable metamorphic relation language: parse, validate,
serialize, instantiate."""

from .ast import (
    ALL_PRIMS,
    COMPARATORS,
    DEFAULT_TOLERANCE,
    INPUT_KINDS,
    LIST_ONLY_PRIMS,
    PARAM_PRIMS,
    BinOp,
    BoundMr,
    Diagnostic,
    Expr,
    Interval,
    MrSpec,
    Num,
    ParamSpec,
    Prim,
    RelationExpr,
    Sym,
    TolerancePolicy,
    expr_symbols,
    instantiate_mr,
)
from .parser import parse_mr
from .serialize import format_number, serialize_mr
from .validate import validate_mr

__all__ = [
    "ALL_PRIMS",
    "COMPARATORS",
    "DEFAULT_TOLERANCE",
    "INPUT_KINDS",
    "LIST_ONLY_PRIMS",
    "PARAM_PRIMS",
    "BinOp",
    "BoundMr",
    "Diagnostic",
    "Expr",
    "Interval",
    "MrSpec",
    "Num",
    "ParamSpec",
    "Prim",
    "RelationExpr",
    "Sym",
    "TolerancePolicy",
    "expr_symbols",
    "format_number",
    "instantiate_mr",
    "parse_mr",
    "serialize_mr",
    "validate_mr",
]
