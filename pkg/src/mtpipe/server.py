"""Read/act HTTP API over campaign directories for the explorer UI.

Serving is read-only over existing campaigns; the single write path is
child-campaign creation through the rerun endpoint, which never mutates
parent files. Payload schemas mirror the artifact file formats.
"""

from __future__ import annotations

import json
import threading
from pathlib import Path

from fastapi import Body, FastAPI, HTTPException, Query, Response
from fastapi.middleware.cors import CORSMiddleware

from . import datagen, executor, miner, pipeline
from .catalog import Catalog, builtin_catalog, catalog_to_json, load_catalog
from .errors import FormatError, IoError, MtError
from .features import BASE_FLAGS, BASE_NUMERIC, Atom, extract_features
from .miner import MineOptions, analyze_trials, constraint_metrics
from .suts import default_registry

MAX_PAGE = 1000
RERUN_DEFAULT_N = 60


class _CampaignStore:
    """Campaign discovery and cached trial logs keyed by id or dir name."""

    def __init__(self, root: Path):
        self.root = root
        self._trials_cache: dict[str, tuple[float, list]] = {}
        self._rerun_locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def rerun_lock(self, parent_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._rerun_locks.setdefault(parent_id, threading.Lock())

    def campaign_dirs(self) -> list[Path]:
        return sorted(
            (p.parent for p in self.root.glob(f"*/{pipeline.MANIFEST_NAME}")),
            key=lambda p: p.name,
        )

    def resolve(self, campaign_id: str) -> tuple[Path, dict]:
        for d in self.campaign_dirs():
            try:
                manifest = pipeline.read_manifest(d)
            except (IoError, FormatError):
                continue
            if d.name == campaign_id or manifest.get("campaign_id") == campaign_id:
                return d, manifest
        raise HTTPException(status_code=404, detail=f"unknown campaign {campaign_id!r}")

    def trials(self, campaign_dir: Path, manifest: dict) -> list:
        name = manifest.get("run", {}).get("trials_file", pipeline.TRIALS_NAME)
        path = campaign_dir / name
        if not path.exists():
            raise HTTPException(status_code=404, detail="campaign has no trial log yet")
        key = str(path)
        mtime = path.stat().st_mtime
        cached = self._trials_cache.get(key)
        if cached is None or cached[0] != mtime:
            self._trials_cache[key] = (mtime, executor.load_trials(path))
        return self._trials_cache[key][1]


def _campaign_summary(d: Path, manifest: dict) -> dict:
    return {
        "id": manifest.get("campaign_id", d.name),
        "dir": d.name,
        "parent_id": manifest.get("parent_id"),
        "started_at": manifest.get("started_at"),
        "trial_count": manifest.get("run", {}).get("trial_count"),
        "suts": manifest.get("run", {}).get("suts"),
        "has": {
            "dataset": (d / manifest.get("gen", {}).get("dataset_file", pipeline.DATASET_NAME)).exists(),
            "trials": (d / manifest.get("run", {}).get("trials_file", pipeline.TRIALS_NAME)).exists(),
            "constraints": (d / manifest.get("mine", {}).get("report_file", pipeline.CONSTRAINTS_NAME)).exists(),
            "mutation": (d / manifest.get("eval", {}).get("report_file", pipeline.MUTATION_NAME)).exists(),
        },
    }


def _load_campaign_catalog(manifest: dict) -> Catalog:
    name = manifest.get("run", {}).get("catalog", "builtin")
    if name == "builtin":
        return builtin_catalog()
    try:
        return load_catalog(name)
    except MtError:
        return builtin_catalog()


def _parse_atoms(raw_atoms) -> tuple[Atom, ...]:
    if not isinstance(raw_atoms, list):
        raise HTTPException(status_code=422, detail="atoms must be a list")
    if len(raw_atoms) > 2:
        raise HTTPException(status_code=422, detail="constraints are limited to 2 atoms")
    try:
        return tuple(Atom.from_json_dict(a) for a in raw_atoms)
    except FormatError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc


def create_app(root: str | Path) -> FastAPI:
    root = Path(root)
    store = _CampaignStore(root)
    app = FastAPI(title="mtpipe explorer API")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
        expose_headers=["X-Total-Count"],
    )

    @app.get("/api/campaigns")
    def campaigns() -> dict:
        out = []
        for d in store.campaign_dirs():
            try:
                out.append(_campaign_summary(d, pipeline.read_manifest(d)))
            except (IoError, FormatError):
                continue
        return {"campaigns": out}

    @app.get("/api/campaigns/{campaign_id}")
    def campaign(campaign_id: str) -> dict:
        d, manifest = store.resolve(campaign_id)
        summary = _campaign_summary(d, manifest)
        summary["manifest"] = manifest
        constraints_file = d / manifest.get("mine", {}).get("report_file",
                                                            pipeline.CONSTRAINTS_NAME)
        if constraints_file.exists():
            summary["constraints"] = miner.load_report(constraints_file)
        return summary

    @app.get("/api/campaigns/{campaign_id}/trials")
    def trials(campaign_id: str, response: Response,
               sut: str | None = None, mr: str | None = None,
               verdict: str | None = None, mutant: str | None = None,
               limit: int = Query(100, ge=1, le=MAX_PAGE),
               offset: int = Query(0, ge=0)) -> dict:
        d, manifest = store.resolve(campaign_id)
        records = store.trials(d, manifest)
        rows = [
            r for r in records
            if (sut is None or r.sut_id == sut)
            and (mr is None or r.mr_id == mr)
            and (verdict is None or r.verdict == verdict)
            and (mutant is None or (r.mutant_id or "-") == mutant)
        ]
        page = rows[offset: offset + limit]
        response.headers["X-Total-Count"] = str(len(rows))
        return {
            "total": len(rows),
            "offset": offset,
            "limit": limit,
            "trials": [r.to_json_dict() for r in page],
        }

    @app.get("/api/campaigns/{campaign_id}/features")
    def features(campaign_id: str, sut: str, mr: str) -> dict:
        d, manifest = store.resolve(campaign_id)
        records = [r for r in store.trials(d, manifest)
                   if r.sut_id == sut and r.mr_id == mr and r.mutant_id is None]
        rows = []
        numeric = set(BASE_NUMERIC)
        for r in records:
            fv = extract_features(r.source_input, r.param_binding)
            numeric.update(k for k, v in fv.items()
                           if k not in BASE_FLAGS and not isinstance(v, bool) and v is not None)
            rows.append({"trial_id": r.trial_id, "verdict": r.verdict, "features": fv})
        return {
            "sut": sut,
            "mr": mr,
            "numeric_features": sorted(numeric),
            "flag_features": list(BASE_FLAGS),
            "rows": rows,
        }

    @app.get("/api/catalog")
    def catalog() -> dict:
        return catalog_to_json(builtin_catalog())

    @app.post("/api/campaigns/{campaign_id}/constraints")
    def evaluate_constraint(campaign_id: str, body: dict = Body(...),
                            sut: str | None = None, mr: str | None = None) -> dict:
        d, manifest = store.resolve(campaign_id)
        sut = sut or body.get("sut")
        mr = mr or body.get("mr")
        if not sut or not mr:
            raise HTTPException(status_code=422, detail="sut and mr are required")
        atoms = _parse_atoms(body.get("atoms", []))
        group = [r for r in store.trials(d, manifest)
                 if r.sut_id == sut and r.mr_id == mr and r.mutant_id is None]
        if not group:
            raise HTTPException(status_code=404, detail=f"no trials for {sut}:{mr}")
        metrics = constraint_metrics(atoms, group)
        metrics["sut"] = sut
        metrics["mr"] = mr
        metrics["atoms"] = [a.to_json_dict() for a in atoms]
        return metrics

    @app.post("/api/campaigns/{campaign_id}/rerun")
    def rerun(campaign_id: str, body: dict = Body(...)) -> dict:
        d, manifest = store.resolve(campaign_id)
        sut = body.get("sut")
        mr = body.get("mr")
        if not sut or not mr:
            raise HTTPException(status_code=422, detail="sut and mr are required")
        atoms = _parse_atoms(body.get("atoms", []))
        seed = int(body.get("seed", 0))
        want_n = int(body.get("n", RERUN_DEFAULT_N))
        cap = min(int(body.get("cap", pipeline.REJECTION_CAP)), pipeline.REJECTION_CAP)

        gen_section = manifest.get("gen", {})
        run_section = manifest.get("run", {})
        kind = gen_section.get("kind", "list-float")
        profiles = pipeline.profiles_from_json(gen_section["profiles"]) \
            if gen_section.get("profiles") else datagen.default_profiles(want_n)

        registry = default_registry()
        if registry.get(sut) is None:
            raise HTTPException(status_code=422, detail=f"unknown SUT {sut!r}")
        catalog_obj = _load_campaign_catalog(manifest)
        entry = catalog_obj.get(mr)
        if entry is None:
            raise HTTPException(status_code=422, detail=f"unknown MR {mr!r}")
        only_mr = Catalog(entries=(entry,))

        parent_id = manifest.get("campaign_id", d.name)
        with store.rerun_lock(parent_id):
            data, draws, partial = pipeline.rejection_sample(kind, profiles, seed, want_n,
                                                             atoms, cap=cap)
            child_dir = root / f"tmp-{parent_id}-{seed}"
            child_dir.mkdir(parents=True, exist_ok=True)
            datagen.save_dataset(data, child_dir / pipeline.DATASET_NAME)
            pipeline.update_manifest(child_dir, "gen", {
                "kind": kind,
                "n": len(data),
                "seed": seed,
                "requested_n": want_n,
                "rejection": {"draws": draws, "partial": partial,
                              "atoms": [a.to_json_dict() for a in atoms]},
                "dataset_file": pipeline.DATASET_NAME,
                "dataset_hash": pipeline.sha256_file(child_dir / pipeline.DATASET_NAME),
            })
            records = []
            if data:
                config = executor.CampaignConfig(
                    sut_ids=(sut,),
                    params_per_datum=int(run_section.get("params_per_datum", 3)),
                    seed=seed,
                )
                records = executor.run_campaign(config, registry, only_mr, data).records
            executor.save_trials(records, child_dir / pipeline.TRIALS_NAME)
            pipeline.update_manifest(child_dir, "run", {
                "suts": [sut],
                "catalog": run_section.get("catalog", "builtin"),
                "catalog_hash": pipeline.catalog_hash(only_mr),
                "dataset_file": pipeline.DATASET_NAME,
                "dataset_hash": pipeline.sha256_file(child_dir / pipeline.DATASET_NAME),
                "seed": seed,
                "params_per_datum": int(run_section.get("params_per_datum", 3)),
                "trial_count": len(records),
                "trials_file": pipeline.TRIALS_NAME,
                "trials_hash": pipeline.sha256_file(child_dir / pipeline.TRIALS_NAME),
            })
            if records:
                options = MineOptions()
                verdicts = analyze_trials(records, options)
                doc = miner.report_to_json(verdicts, options, {
                    "trials_hash": pipeline.sha256_file(child_dir / pipeline.TRIALS_NAME),
                })
                miner.save_report(doc, child_dir / pipeline.CONSTRAINTS_NAME)
                pipeline.update_manifest(child_dir, "mine", {
                    "options": doc["options"],
                    "report_file": pipeline.CONSTRAINTS_NAME,
                })
            manifest_doc = pipeline.read_manifest(child_dir)
            manifest_doc["parent_id"] = parent_id
            manifest_doc["campaign_id"] = pipeline.campaign_id_for(manifest_doc)
            (child_dir / pipeline.MANIFEST_NAME).write_text(
                json.dumps(manifest_doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
            child_id = manifest_doc["campaign_id"]
            final_dir = root / child_id
            if final_dir.exists():
                # identical rerun already materialized; drop the duplicate
                for f in child_dir.iterdir():
                    f.unlink()
                child_dir.rmdir()
            else:
                child_dir.rename(final_dir)

        return {
            "child_id": child_id,
            "parent_id": parent_id,
            "generated": len(data),
            "requested": want_n,
            "draws": draws,
            "partial": partial,
        }

    return app
