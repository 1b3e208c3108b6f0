"""MR catalogs: the six built-in relations, user catalog files, and the
signature gate that matches relations to subject functions.

Catalog files are JSON with the DSL text as the authoritative field;
structured specs are derived by parsing at load.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import FormatError, IoError, MrValidationError
from .mrlang import MrSpec, parse_mr, serialize_mr

# The six predefined relations over list-valued numeric functions. The
# transform/relation pairings follow the usual conventions for
# aggregation-style subjects: growing the input (adding a positive
# constant, scaling up, appending a positive element) should not shrink
# the output; reordering should not change it; negating or truncating
# should not grow it. Where a relation only holds on part of the input
# space, the miner, not the catalog, is responsible for finding that part.
_BUILTIN_DSL: tuple[tuple[str, str], ...] = (
    ("additive",
     "mr additive { input: list-float; param c: float in (0.0, 10.0]; "
     "follow: add(c); expect: out_f >= out_s; tol: rel 1e-9 abs 1e-12; }"),
    ("multiplicative",
     "mr multiplicative { input: list-float; param k: float in (1.0, 10.0]; "
     "follow: scale(k); expect: out_f >= out_s; tol: rel 1e-9 abs 1e-12; }"),
    ("permutative",
     "mr permutative { input: list-float; follow: permute; "
     "expect: out_f == out_s; tol: rel 1e-9 abs 1e-12; }"),
    ("invertive",
     "mr invertive { input: list-float; follow: negate; "
     "expect: out_f <= out_s; tol: rel 1e-9 abs 1e-12; }"),
    ("inclusive",
     "mr inclusive { input: list-float; param v: float in (0.0, 10.0]; "
     "follow: include(v); expect: out_f >= out_s; tol: rel 1e-9 abs 1e-12; }"),
    ("exclusive",
     "mr exclusive { input: list-float; follow: exclude-last; "
     "expect: out_f <= out_s; tol: rel 1e-9 abs 1e-12; }"),
)

_BUILTIN_NOTES = {
    "additive": "add a positive constant to every element; aggregate should not decrease",
    "multiplicative": "scale every element by k > 1; aggregate should not decrease",
    "permutative": "reorder elements; aggregate should be unchanged",
    "invertive": "negate every element; aggregate should not increase",
    "inclusive": "append a positive element; aggregate should not decrease",
    "exclusive": "drop the last element; aggregate should not increase",
}


@dataclass(frozen=True)
class CatalogEntry:
    spec: MrSpec
    domain_tag: str | None = None
    source_note: str | None = None


@dataclass(frozen=True)
class Catalog:
    entries: tuple[CatalogEntry, ...] = field(default_factory=tuple)

    def ids(self) -> list[str]:
        return [e.spec.id for e in self.entries]

    def get(self, mr_id: str) -> CatalogEntry | None:
        for e in self.entries:
            if e.spec.id == mr_id:
                return e
        return None


def builtin_catalog() -> Catalog:
    """The six predefined relations, all over list-float inputs."""
    entries = tuple(
        CatalogEntry(spec=parse_mr(dsl), domain_tag="numeric", source_note=_BUILTIN_NOTES[mr_id])
        for mr_id, dsl in _BUILTIN_DSL
    )
    return Catalog(entries=entries)


def catalog_to_json(catalog: Catalog) -> dict:
    return {
        "entries": [
            {
                "dsl": serialize_mr(e.spec),
                "domain": e.domain_tag,
                "source_note": e.source_note,
            }
            for e in catalog.entries
        ]
    }


def catalog_from_json(doc: dict, source: str = "<catalog>") -> Catalog:
    if not isinstance(doc, dict) or not isinstance(doc.get("entries"), list):
        raise FormatError(f"{source}: catalog must be an object with an 'entries' list")
    entries: list[CatalogEntry] = []
    seen: set[str] = set()
    for i, raw in enumerate(doc["entries"]):
        if not isinstance(raw, dict) or not isinstance(raw.get("dsl"), str):
            raise FormatError(f"{source}: entry {i} must be an object with a 'dsl' string")
        spec = parse_mr(raw["dsl"])
        if spec.id in seen:
            _duplicate_id_error(source, spec.id)
        seen.add(spec.id)
        entries.append(CatalogEntry(
            spec=spec,
            domain_tag=raw.get("domain"),
            source_note=raw.get("source_note"),
        ))
    return Catalog(entries=tuple(entries))


def _duplicate_id_error(source: str, mr_id: str):
    from .mrlang import Diagnostic

    raise MrValidationError([Diagnostic("duplicate-id", f"{source}: id {mr_id!r} appears twice",
                                        mr_id)])


def load_catalog(path: str | Path) -> Catalog:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read catalog {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON: {exc}") from exc
    return catalog_from_json(doc, source=str(path))


def save_catalog(catalog: Catalog, path: str | Path) -> None:
    path = Path(path)
    try:
        path.write_text(json.dumps(catalog_to_json(catalog), indent=2) + "\n", encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write catalog {path}: {exc}") from exc


def match_mrs(catalog: Catalog, sut) -> list[MrSpec]:
    """Signature compatibility gate: relations whose input kind equals the
    subject's input kind, in catalog order."""
    return [e.spec for e in catalog.entries if e.spec.input_kind == sut.input_kind]
