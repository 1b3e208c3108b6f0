"""Semantic validation of MrSpec values.

validate_mr returns a list of diagnostics; an empty list means the spec
satisfies every invariant. Diagnostics never raise, so callers can collect
all findings at once.
"""

from __future__ import annotations

import math
import re

from .ast import (
    COMPARATORS,
    INPUT_KINDS,
    LEN_SYMBOL,
    LIST_ONLY_PRIMS,
    OUT_SOURCE,
    PARAM_PRIMS,
    RESERVED_SYMBOLS,
    BinOp,
    Diagnostic,
    Expr,
    MrSpec,
    Num,
    Sym,
)

_ID_RE = re.compile(r"[a-z][a-z0-9_-]*\Z")


def _walk(expr: Expr):
    yield expr
    if isinstance(expr, BinOp):
        yield from _walk(expr.left)
        yield from _walk(expr.right)


def validate_mr(spec: MrSpec) -> list[Diagnostic]:
    diags: list[Diagnostic] = []

    if not _ID_RE.match(spec.id):
        diags.append(Diagnostic("bad-id", f"id {spec.id!r} must match [a-z][a-z0-9_-]*", spec.id))
    if spec.input_kind not in INPUT_KINDS:
        diags.append(Diagnostic("bad-input-kind", f"unknown input kind {spec.input_kind!r}",
                                spec.input_kind))

    declared: dict[str, int] = {}
    for p in spec.params:
        declared[p.name] = declared.get(p.name, 0) + 1
        if p.name in RESERVED_SYMBOLS:
            diags.append(Diagnostic("reserved-param",
                                    f"parameter {p.name!r} shadows a reserved symbol", p.name))
        if p.kind not in ("int", "float"):
            diags.append(Diagnostic("bad-param-kind", f"parameter {p.name!r} has kind {p.kind!r}",
                                    p.name))
        dom = p.domain
        if not (math.isfinite(dom.lo) and math.isfinite(dom.hi)):
            diags.append(Diagnostic("unbounded-domain",
                                    f"domain of {p.name!r} must have finite bounds", p.name))
        elif not dom.lo < dom.hi:
            diags.append(Diagnostic("empty-domain",
                                    f"domain of {p.name!r} needs lower bound < upper bound", p.name))
    for name, count in declared.items():
        if count > 1:
            diags.append(Diagnostic("duplicate-param", f"parameter {name!r} declared {count} times",
                                    name))

    is_scalar = spec.input_kind.startswith("scalar")
    is_int = spec.input_kind.endswith("int")
    for prim in spec.transform:
        if is_scalar and prim.op in LIST_ONLY_PRIMS:
            diags.append(Diagnostic("list-only-prim",
                                    f"{prim.op!r} applies to list inputs only", prim.op))
        if prim.op in PARAM_PRIMS:
            if prim.arg not in declared:
                diags.append(Diagnostic("unknown-symbol",
                                        f"transform references undeclared parameter {prim.arg!r}",
                                        prim.arg or ""))
            elif is_int and spec.param(prim.arg).kind != "int":
                # int-kind inputs must stay ints after the transform
                diags.append(Diagnostic("kind-mismatch",
                                        f"{prim.op!r} with float parameter {prim.arg!r} breaks "
                                        f"{spec.input_kind} closure", prim.arg))

    if spec.relation.comparator not in COMPARATORS:
        diags.append(Diagnostic("bad-comparator",
                                f"unknown comparator {spec.relation.comparator!r}",
                                spec.relation.comparator))
    for node in _walk(spec.relation.right):
        if isinstance(node, Sym):
            if node.name in (OUT_SOURCE, LEN_SYMBOL):
                continue
            if node.name not in declared:
                diags.append(Diagnostic("unknown-symbol",
                                        f"relation references undeclared symbol {node.name!r}",
                                        node.name))
        elif isinstance(node, BinOp) and node.op == "/":
            if isinstance(node.right, Num) and node.right.value == 0.0:
                diags.append(Diagnostic("division-by-zero", "relation divides by literal zero"))
        elif isinstance(node, Num) and not math.isfinite(node.value):
            diags.append(Diagnostic("non-finite-literal", f"literal {node.value!r} is not finite"))

    tol = spec.tolerance
    if not (math.isfinite(tol.rel) and math.isfinite(tol.abs)):
        diags.append(Diagnostic("bad-tolerance", "tolerances must be finite"))
    elif tol.rel < 0 or tol.abs < 0:
        diags.append(Diagnostic("bad-tolerance", "tolerances must be nonnegative"))
    elif (spec.relation.comparator == "==" and spec.input_kind.endswith("float")
          and tol.rel == 0 and tol.abs == 0):
        diags.append(Diagnostic("bad-tolerance",
                                "exact equality over floats needs rel or abs tolerance > 0"))

    return diags
