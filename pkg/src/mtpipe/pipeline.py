"""Campaign directory management and provenance.

A campaign directory holds manifest.json plus the artifacts the commands
produce (data.jsonl, trials.jsonl, constraints.json, mutation.json). Every
downstream artifact embeds upstream content hashes; a mismatch fails with
StaleConstraints instead of silently accepting tampered inputs.

The campaign id derives from the manifest content (minus volatile fields),
so re-serializing a directory never changes its identity. started_at
honors SOURCE_DATE_EPOCH for reproducible runs.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import asdict
from pathlib import Path

from .catalog import Catalog, catalog_to_json
from .datagen import GenProfile, TestDatum, generate_dataset
from .errors import FormatError, IoError
from .features import Atom, eval_atoms, extract_features
from .rng import mix64

MANIFEST_NAME = "manifest.json"
DATASET_NAME = "data.jsonl"
TRIALS_NAME = "trials.jsonl"
CONSTRAINTS_NAME = "constraints.json"
MUTATION_NAME = "mutation.json"

REJECTION_CAP = 10**6


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def sha256_file(path: str | Path) -> str:
    try:
        return hashlib.sha256(Path(path).read_bytes()).hexdigest()
    except OSError as exc:
        raise IoError(f"cannot hash {path}: {exc}") from exc


def catalog_hash(catalog: Catalog) -> str:
    return sha256_text(canonical_json(catalog_to_json(catalog)))


def timestamp() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    t = int(epoch) if epoch is not None else int(time.time())
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(t))


# manifest -------------------------------------------------------------------

_VOLATILE_KEYS = ("campaign_id", "started_at")


def campaign_id_for(manifest: dict) -> str:
    scrubbed = {k: v for k, v in manifest.items() if k not in _VOLATILE_KEYS}
    return sha256_text(canonical_json(scrubbed))[:12]


def read_manifest(campaign_dir: str | Path) -> dict:
    path = Path(campaign_dir) / MANIFEST_NAME
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise IoError(f"cannot read manifest {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise FormatError(f"{path}: manifest must be a JSON object")
    return doc


def update_manifest(campaign_dir: str | Path, section: str, values: dict) -> dict:
    """Merge one command's section into the manifest and refresh the id."""
    campaign_dir = Path(campaign_dir)
    campaign_dir.mkdir(parents=True, exist_ok=True)
    path = campaign_dir / MANIFEST_NAME
    manifest: dict = {}
    if path.exists():
        manifest = read_manifest(campaign_dir)
    manifest.setdefault("started_at", timestamp())
    manifest[section] = values
    manifest["campaign_id"] = campaign_id_for(manifest)
    try:
        path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write manifest {path}: {exc}") from exc
    return manifest


def profiles_to_json(profiles: list[GenProfile]) -> list[dict]:
    return [asdict(p) for p in profiles]


def profiles_from_json(raw: list[dict]) -> list[GenProfile]:
    out = []
    for p in raw:
        out.append(GenProfile(
            n=int(p["n"]),
            len_range=tuple(p.get("len_range", (1, 12))),
            value_range=tuple(p.get("value_range", (-100.0, 100.0))),
            sign_mix=p.get("sign_mix", "any"),
            duplicates_allowed=bool(p.get("duplicates_allowed", True)),
            full_precision=bool(p.get("full_precision", False)),
        ))
    return out


# constrained regeneration -----------------------------------------------------

def rejection_sample(signature: str, profiles: list[GenProfile], seed: int, want_n: int,
                     atoms: tuple[Atom, ...], cap: int = REJECTION_CAP,
                     ) -> tuple[list[TestDatum], int, bool]:
    """Generate data whose features satisfy the atoms, by rejection.

    Draws rotate through the profiles with independently derived seeds.
    Atoms over parameter features can never match at datum time (parameters
    bind per trial), so such drafts produce an empty partial dataset rather
    than an error. Returns (data, draws, partial) where partial means the
    cap was hit before want_n acceptances.
    """
    accepted: list[TestDatum] = []
    draws = 0
    while len(accepted) < want_n and draws < cap:
        profile = profiles[draws % len(profiles)]
        candidate = generate_dataset(
            signature,
            GenProfile(n=1, len_range=profile.len_range, value_range=profile.value_range,
                       sign_mix=profile.sign_mix, duplicates_allowed=profile.duplicates_allowed,
                       full_precision=profile.full_precision),
            mix64(seed, 2000 + draws),
            first_id=len(accepted),
            stratum=profile.sign_mix,
        )[0]
        draws += 1
        fv = extract_features(candidate.argument, {})
        if eval_atoms(atoms, fv):
            accepted.append(candidate)
    return accepted, draws, len(accepted) < want_n
