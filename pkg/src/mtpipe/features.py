"""Per-trial feature extraction and constraint atoms.

Features derive solely from the source input and parameter binding, never
from outputs: a constraint must be checkable before execution. Undefined
numeric features (min/max/mean of an empty list) are represented as None
and never satisfy any atom.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import FormatError

BASE_NUMERIC = ("list_len", "max_elem", "mean_elem", "min_elem")
BASE_FLAGS = ("all_nonneg", "all_nonpos", "has_duplicates", "is_sorted")

GE = "ge"
LE = "le"
EQ = "eq"


@dataclass(frozen=True)
class Atom:
    """One predicate over a feature: numeric >= / <= threshold, or flag == bool."""

    feature: str
    op: str
    value: float | bool

    def __str__(self) -> str:
        symbol = {GE: ">=", LE: "<=", EQ: "="}[self.op]
        shown = str(self.value).lower() if self.op == EQ else repr(self.value)
        return f"{self.feature} {symbol} {shown}"

    def to_json_dict(self) -> dict:
        return {"feature": self.feature, "op": self.op, "value": self.value}

    @classmethod
    def from_json_dict(cls, raw: dict) -> "Atom":
        try:
            feature = str(raw["feature"])
            op = str(raw["op"])
            value = raw["value"]
        except (KeyError, TypeError) as exc:
            raise FormatError(f"bad atom {raw!r}: {exc}") from exc
        if op == EQ:
            if not isinstance(value, bool):
                raise FormatError(f"atom {feature!r}: eq expects a boolean value")
        elif op in (GE, LE):
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise FormatError(f"atom {feature!r}: {op} expects a numeric threshold")
            value = float(value)
        else:
            raise FormatError(f"atom {feature!r}: unknown op {op!r}")
        return cls(feature=feature, op=op, value=value)

    def sort_key(self) -> tuple:
        return (self.feature, self.op, repr(self.value))


def extract_features(source_input, param_binding: dict) -> dict:
    """Feature vector for one trial: base statistics, sign/shape flags, and
    every parameter value under its own name.

    Scalars behave as single-element lists. The mean uses exactly rounded
    summation (fsum) so the value is permutation-invariant bit-for-bit;
    recounts must use the same definition. Parameter names that collide
    with a base feature are prefixed with ``param_`` to stay addressable.
    """
    if isinstance(source_input, (list, tuple)):
        values = [float(v) for v in source_input]
    else:
        values = [float(source_input)]
    n = len(values)
    fv: dict = {
        "list_len": float(n),
        "min_elem": min(values) if values else None,
        "max_elem": max(values) if values else None,
        "mean_elem": math.fsum(values) / n if values else None,
        "all_nonneg": all(v >= 0 for v in values),
        "all_nonpos": all(v <= 0 for v in values),
        "has_duplicates": len(set(values)) < n,
        "is_sorted": all(values[i] <= values[i + 1] for i in range(n - 1)),
    }
    for name in sorted(param_binding):
        key = name if name not in fv else f"param_{name}"
        fv[key] = float(param_binding[name])
    return fv


def eval_atom(atom: Atom, fv: dict) -> bool:
    value = fv.get(atom.feature)
    if value is None:
        return False
    if atom.op == EQ:
        return bool(value) is bool(atom.value)
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        return False
    if atom.op == GE:
        return value >= atom.value
    return value <= atom.value


def eval_atoms(atoms: tuple[Atom, ...], fv: dict) -> bool:
    return all(eval_atom(a, fv) for a in atoms)


def numeric_feature_names(fvs: list[dict]) -> list[str]:
    """Numeric feature names present in any vector, base features first."""
    names = [f for f in BASE_NUMERIC]
    extra = set()
    for fv in fvs:
        for key, value in fv.items():
            if key in BASE_NUMERIC or key in BASE_FLAGS:
                continue
            if isinstance(value, bool) or value is None:
                continue
            if isinstance(value, (int, float)):
                extra.add(key)
    return names + sorted(extra)
