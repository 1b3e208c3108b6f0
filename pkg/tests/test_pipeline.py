import json

from mtpipe.datagen import GenProfile, default_profiles
from mtpipe.features import Atom
from mtpipe.pipeline import (
    campaign_id_for,
    canonical_json,
    read_manifest,
    rejection_sample,
    sha256_text,
    update_manifest,
)


def test_campaign_id_stable_across_reserialization(tmp_path):
    update_manifest(tmp_path, "gen", {"seed": 7, "n": 10})
    manifest = read_manifest(tmp_path)
    original_id = manifest["campaign_id"]
    # rewrite the file with different formatting; identity must not move
    (tmp_path / "manifest.json").write_text(json.dumps(manifest, indent=None))
    assert read_manifest(tmp_path)["campaign_id"] == original_id
    assert campaign_id_for(read_manifest(tmp_path)) == original_id


def test_campaign_id_ignores_volatile_fields():
    a = {"gen": {"seed": 7}, "started_at": "1999-01-01T00:00:00Z", "campaign_id": "x"}
    b = {"gen": {"seed": 7}, "started_at": "2030-06-06T06:06:06Z", "campaign_id": "y"}
    assert campaign_id_for(a) == campaign_id_for(b)
    assert campaign_id_for({"gen": {"seed": 8}}) != campaign_id_for(a)


def test_update_manifest_merges_sections(tmp_path):
    update_manifest(tmp_path, "gen", {"seed": 7})
    manifest = update_manifest(tmp_path, "run", {"trial_count": 60})
    assert manifest["gen"]["seed"] == 7
    assert manifest["run"]["trial_count"] == 60


def test_started_at_honors_source_date_epoch(tmp_path, monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "0")
    manifest = update_manifest(tmp_path, "gen", {"seed": 1})
    assert manifest["started_at"] == "1970-01-01T00:00:00Z"


def test_canonical_json_is_key_order_independent():
    assert canonical_json({"b": 1, "a": [2, 3]}) == canonical_json({"a": [2, 3], "b": 1})
    assert sha256_text(canonical_json({"x": 1})) == sha256_text('{"x":1}')


def test_rejection_sample_deterministic_and_in_region():
    atoms = (Atom("all_nonneg", "eq", True),)
    profiles = default_profiles(20)
    a, draws_a, partial_a = rejection_sample("list-float", profiles, 5, 12, atoms)
    b, draws_b, partial_b = rejection_sample("list-float", profiles, 5, 12, atoms)
    assert (a, draws_a, partial_a) == (b, draws_b, partial_b)
    assert not partial_a
    assert len(a) == 12
    assert [d.datum_id for d in a] == list(range(12))
    for d in a:
        assert all(v >= 0 for v in d.argument)


def test_rejection_sample_cap_yields_partial():
    atoms = (Atom("min_elem", "ge", 1000.0),)
    data, draws, partial = rejection_sample("list-float", default_profiles(4), 5, 3,
                                            atoms, cap=500)
    assert partial and data == [] and draws == 500


def test_rejection_sample_param_atoms_never_match():
    # parameters bind per trial, not per datum: such drafts cannot be
    # satisfied at generation time and come back empty with the flag set
    atoms = (Atom("c", "ge", 0.5),)
    data, draws, partial = rejection_sample("list-float", [GenProfile(n=1)], 5, 2,
                                            atoms, cap=200)
    assert partial and data == []
