import json

import pytest

from mtpipe.catalog import builtin_catalog, load_catalog, match_mrs, save_catalog
from mtpipe.errors import IoError, MrValidationError
from mtpipe.mrlang import Prim, Sym, validate_mr

BUILTIN_IDS = {"additive", "multiplicative", "permutative", "invertive", "inclusive", "exclusive"}


def test_builtin_catalog_has_the_six_relations(catalog):
    assert set(catalog.ids()) == BUILTIN_IDS
    assert len(catalog.entries) == 6


def test_builtin_catalog_is_deterministic():
    a = builtin_catalog()
    b = builtin_catalog()
    assert [e.spec for e in a.entries] == [e.spec for e in b.entries]


def test_every_builtin_validates_clean(catalog):
    for entry in catalog.entries:
        assert validate_mr(entry.spec) == []
        assert entry.spec.input_kind == "list-float"


def test_permutative_definition(catalog):
    spec = catalog.get("permutative").spec
    assert spec.transform == (Prim("permute"),)
    assert spec.relation.comparator == "=="
    assert spec.relation.right == Sym("out_s")


def test_builtin_relation_shapes(catalog):
    comparators = {e.spec.id: e.spec.relation.comparator for e in catalog.entries}
    assert comparators == {
        "additive": ">=",
        "multiplicative": ">=",
        "permutative": "==",
        "invertive": "<=",
        "inclusive": ">=",
        "exclusive": "<=",
    }
    additive = catalog.get("additive").spec
    assert additive.params[0].name == "c"
    assert additive.params[0].domain.lo == 0.0 and additive.params[0].domain.lo_open
    multiplicative = catalog.get("multiplicative").spec
    assert multiplicative.params[0].domain.lo == 1.0 and multiplicative.params[0].domain.lo_open


def test_catalog_file_roundtrip(tmp_path, catalog):
    path = tmp_path / "catalog.json"
    save_catalog(catalog, path)
    loaded = load_catalog(path)
    assert [e.spec for e in loaded.entries] == [e.spec for e in catalog.entries]
    assert [e.domain_tag for e in loaded.entries] == [e.domain_tag for e in catalog.entries]


def test_load_rejects_duplicate_ids(tmp_path):
    dsl = ("mr additive { input: list-float; param c: float in (0.0, 10.0]; follow: add(c); "
           "expect: out_f >= out_s; tol: rel 1e-9 abs 1e-12; }")
    doc = {"entries": [{"dsl": dsl}, {"dsl": dsl}]}
    path = tmp_path / "dup.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(MrValidationError):
        load_catalog(path)


def test_load_missing_file_is_io_error(tmp_path):
    with pytest.raises(IoError):
        load_catalog(tmp_path / "absent.json")


def test_match_mrs_by_input_kind(catalog, registry):
    suts = {s.id: s for s in registry.suts}
    matched = match_mrs(catalog, suts["sum"])
    assert [m.id for m in matched] == [e.spec.id for e in catalog.entries]


def test_match_mrs_scalar_gets_nothing_from_builtins(catalog):
    class ScalarSut:
        input_kind = "scalar-float"

    assert match_mrs(catalog, ScalarSut()) == []


def test_match_mrs_scalar_variant_in_user_catalog(tmp_path):
    dsl = ("mr scalar_add { input: scalar-float; param c: float in (0.0, 1.0]; follow: add(c); "
           "expect: out_f >= out_s; tol: rel 1e-9 abs 1e-12; }")
    path = tmp_path / "user.json"
    path.write_text(json.dumps({"entries": [{"dsl": dsl, "domain": "numeric"}]}))
    catalog = load_catalog(path)

    class ScalarSut:
        input_kind = "scalar-float"

    assert [m.id for m in match_mrs(catalog, ScalarSut())] == ["scalar_add"]


def test_match_mrs_empty_catalog(registry):
    from mtpipe.catalog import Catalog

    assert match_mrs(Catalog(), registry.get("sum")) == []


def test_match_is_idempotent_filter(catalog, registry):
    from mtpipe.catalog import Catalog, CatalogEntry

    sut = registry.get("sum")
    once = match_mrs(catalog, sut)
    twice = match_mrs(Catalog(entries=tuple(CatalogEntry(spec=s) for s in once)), sut)
    assert twice == once
