import pytest

from mtpipe.errors import FormatError
from mtpipe.features import EQ, GE, LE, Atom, eval_atom, eval_atoms, extract_features


def test_basic_extraction():
    fv = extract_features([1.0, 2.0, 3.0], {"c": 1.0})
    assert fv["min_elem"] == 1.0
    assert fv["max_elem"] == 3.0
    assert fv["mean_elem"] == 2.0
    assert fv["list_len"] == 3.0
    assert fv["all_nonneg"] is True
    assert fv["all_nonpos"] is False
    assert fv["c"] == 1.0


def test_empty_list_has_undefined_statistics():
    fv = extract_features([], {})
    assert fv["list_len"] == 0.0
    assert fv["min_elem"] is None
    assert fv["max_elem"] is None
    assert fv["mean_elem"] is None
    # atoms over undefined features never match
    assert eval_atom(Atom("min_elem", GE, -100.0), fv) is False
    assert eval_atom(Atom("min_elem", LE, 100.0), fv) is False


def test_mixed_signs():
    fv = extract_features([-1.0, 1.0], {})
    assert fv["all_nonneg"] is False
    assert fv["all_nonpos"] is False


def test_flags():
    fv = extract_features([1.0, 1.0, 2.0], {})
    assert fv["has_duplicates"] is True
    assert fv["is_sorted"] is True
    fv2 = extract_features([3.0, 1.0], {})
    assert fv2["has_duplicates"] is False
    assert fv2["is_sorted"] is False


def test_scalar_behaves_as_singleton():
    fv = extract_features(-2.5, {})
    assert fv["min_elem"] == fv["max_elem"] == fv["mean_elem"] == -2.5
    assert fv["list_len"] == 1.0
    assert fv["all_nonpos"] is True


def test_param_name_collision_gets_prefixed():
    fv = extract_features([1.0], {"min_elem": 9.0})
    assert fv["min_elem"] == 1.0
    assert fv["param_min_elem"] == 9.0


def test_atom_evaluation():
    fv = extract_features([1.0, 4.0], {"c": 2.0})
    assert eval_atom(Atom("min_elem", GE, 1.0), fv)
    assert not eval_atom(Atom("min_elem", GE, 1.5), fv)
    assert eval_atom(Atom("max_elem", LE, 4.0), fv)
    assert eval_atom(Atom("all_nonneg", EQ, True), fv)
    assert not eval_atom(Atom("all_nonneg", EQ, False), fv)
    assert eval_atom(Atom("c", GE, 2.0), fv)
    assert eval_atoms((Atom("min_elem", GE, 0.0), Atom("list_len", LE, 5.0)), fv)
    assert eval_atoms((), fv)


def test_unknown_feature_never_matches():
    fv = extract_features([1.0], {})
    assert not eval_atom(Atom("no_such", GE, 0.0), fv)


def test_atom_json_roundtrip():
    for atom in (Atom("min_elem", GE, 0.5), Atom("all_nonneg", EQ, True)):
        again = Atom.from_json_dict(atom.to_json_dict())
        assert again == atom


def test_atom_json_validation():
    with pytest.raises(FormatError):
        Atom.from_json_dict({"feature": "x", "op": "between", "value": 1})
    with pytest.raises(FormatError):
        Atom.from_json_dict({"feature": "x", "op": "ge", "value": True})
    with pytest.raises(FormatError):
        Atom.from_json_dict({"feature": "x", "op": "eq", "value": 3})
