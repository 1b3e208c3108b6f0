"""Canonical serializer for MrSpec.

Output is one clause per line with normalized number formatting (shortest
round-trip repr), so two specs that differ only in source whitespace
serialize identically, and parse(serialize(spec)) == spec structurally.
"""

from __future__ import annotations

from .ast import BinOp, Expr, MrSpec, Num, Sym

_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2}


def format_number(value: float) -> str:
    """Shortest representation that still parses in the DSL grammar.

    The grammar has no leading '+' and exponent digits are mandatory, which
    repr already guarantees; negative values keep their sign (the parser
    accepts a leading minus as a negative literal).
    """
    text = repr(float(value))
    # repr(1e16) -> '1e+16'; the grammar allows the '+', keep as-is.
    return text


def _expr_text(expr: Expr, parent_prec: int = 0, right_side: bool = False) -> str:
    if isinstance(expr, Num):
        text = format_number(expr.value)
        if expr.value < 0 and parent_prec > 0:
            return f"({text})"
        return text
    if isinstance(expr, Sym):
        return expr.name
    prec = _PRECEDENCE[expr.op]
    text = (f"{_expr_text(expr.left, prec, False)} {expr.op} "
            f"{_expr_text(expr.right, prec, True)}")
    # parenthesize when the child binds looser, or on the right of a
    # non-commutative operator at equal precedence
    if prec < parent_prec or (prec == parent_prec and right_side):
        return f"({text})"
    return text


def serialize_mr(spec: MrSpec) -> str:
    lines = [f"mr {spec.id} {{"]
    lines.append(f"  input: {spec.input_kind};")
    for p in spec.params:
        left = "(" if p.domain.lo_open else "["
        right = ")" if p.domain.hi_open else "]"
        lines.append(
            f"  param {p.name}: {p.kind} in "
            f"{left}{format_number(p.domain.lo)}, {format_number(p.domain.hi)}{right};")
    lines.append("  follow: " + ", ".join(str(prim) for prim in spec.transform) + ";")
    lines.append(f"  expect: out_f {spec.relation.comparator} {_expr_text(spec.relation.right)};")
    lines.append(f"  tol: rel {format_number(spec.tolerance.rel)} "
                 f"abs {format_number(spec.tolerance.abs)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
