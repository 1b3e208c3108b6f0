"""Abstract representation of metamorphic relations.

An MrSpec couples an input transformation program with an expected output
relation. Instances are immutable and structurally comparable; two specs
that parse from differently formatted text but mean the same thing compare
equal. The free-text ``description`` is metadata and excluded from
structural equality (it has no surface in the DSL).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..errors import MissingParam, OutOfDomain, UnknownParam

INPUT_KINDS = ("scalar-int", "scalar-float", "list-int", "list-float")

# Primitives only meaningful for list inputs.
LIST_ONLY_PRIMS = frozenset({"permute", "reverse", "sort-ascending", "include", "exclude-last"})
# Primitives taking a parameter argument.
PARAM_PRIMS = frozenset({"add", "scale", "include"})
ALL_PRIMS = frozenset({"add", "scale", "negate"}) | LIST_ONLY_PRIMS

COMPARATORS = ("==", "<=", ">=", "<", ">")

# Symbols always available inside a relation expression.
OUT_SOURCE = "out_s"
OUT_FOLLOWUP = "out_f"
LEN_SYMBOL = "n"
RESERVED_SYMBOLS = frozenset({OUT_SOURCE, OUT_FOLLOWUP, LEN_SYMBOL})


@dataclass(frozen=True)
class Diagnostic:
    """One validation finding: a stable code, a message, and the offending
    element (param name, symbol, prim, ...)."""

    code: str
    message: str
    element: str = ""

    def __str__(self) -> str:
        where = f" [{self.element}]" if self.element else ""
        return f"{self.code}: {self.message}{where}"


@dataclass(frozen=True)
class Interval:
    """Closed/half-open interval with finite bounds."""

    lo: float
    hi: float
    lo_open: bool = False
    hi_open: bool = False

    def contains(self, value: float) -> bool:
        if not math.isfinite(value):
            return False
        above = value > self.lo if self.lo_open else value >= self.lo
        below = value < self.hi if self.hi_open else value <= self.hi
        return above and below

    def __str__(self) -> str:
        left = "(" if self.lo_open else "["
        right = ")" if self.hi_open else "]"
        return f"{left}{self.lo!r}, {self.hi!r}{right}"


@dataclass(frozen=True)
class ParamSpec:
    name: str
    kind: str  # "int" | "float"
    domain: Interval


@dataclass(frozen=True)
class Prim:
    """One step of a transform program: op plus optional parameter name."""

    op: str
    arg: str | None = None

    def __str__(self) -> str:
        return f"{self.op}({self.arg})" if self.arg is not None else self.op


# Relation expression nodes. The tree is tiny; a tagged union of three
# dataclasses is simpler than a visitor hierarchy.


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Sym:
    name: str


@dataclass(frozen=True)
class BinOp:
    op: str  # + - * /
    left: "Expr"
    right: "Expr"


Expr = Num | Sym | BinOp


@dataclass(frozen=True)
class RelationExpr:
    """``out_f <comparator> <right>`` where right ranges over out_s, params,
    literals and the source length symbol n."""

    comparator: str
    right: Expr


@dataclass(frozen=True)
class TolerancePolicy:
    rel: float = 1e-9
    abs: float = 1e-12


DEFAULT_TOLERANCE = TolerancePolicy()


@dataclass(frozen=True)
class MrSpec:
    id: str
    input_kind: str
    params: tuple[ParamSpec, ...]
    transform: tuple[Prim, ...]
    relation: RelationExpr
    tolerance: TolerancePolicy = DEFAULT_TOLERANCE
    description: str = field(default="", compare=False)

    def param(self, name: str) -> ParamSpec | None:
        for p in self.params:
            if p.name == name:
                return p
        return None


@dataclass(frozen=True)
class BoundMr:
    """MrSpec closed over concrete parameter values."""

    spec: MrSpec
    binding: tuple[tuple[str, float], ...]

    @property
    def binding_map(self) -> dict[str, float]:
        return dict(self.binding)


def expr_symbols(expr: Expr) -> set[str]:
    if isinstance(expr, Sym):
        return {expr.name}
    if isinstance(expr, BinOp):
        return expr_symbols(expr.left) | expr_symbols(expr.right)
    return set()


def referenced_params(spec_transform: tuple[Prim, ...], relation: RelationExpr) -> set[str]:
    names = {p.arg for p in spec_transform if p.arg is not None}
    names |= expr_symbols(relation.right) - RESERVED_SYMBOLS
    return names


def instantiate_mr(spec: MrSpec, binding: dict[str, float]) -> BoundMr:
    """Close a spec over a parameter binding.

    The binding must cover every declared parameter exactly, and each value
    must lie inside its declared domain (open/closed bounds respected).
    Integer parameters additionally require integral values.
    """
    declared = {p.name for p in spec.params}
    missing = sorted(declared - binding.keys())
    if missing:
        raise MissingParam(missing)
    extra = sorted(binding.keys() - declared)
    if extra:
        raise UnknownParam(extra)
    for p in spec.params:
        value = binding[p.name]
        if p.kind == "int" and float(value) != int(value):
            raise OutOfDomain(p.name, value, p.domain)
        if not p.domain.contains(float(value)):
            raise OutOfDomain(p.name, value, p.domain)
    items = tuple(sorted((name, float(value)) for name, value in binding.items()))
    return BoundMr(spec=spec, binding=items)
