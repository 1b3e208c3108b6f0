"""Command line entry points: mt gen | run | mine | eval | serve.

Exit codes: 0 ok, 1 internal error, 2 invalid input or config,
3 provenance mismatch, 4 environment (port, unwritable output).
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import datagen, executor, miner, mutation, pipeline
from .catalog import builtin_catalog, load_catalog
from .errors import (
    ConfigError,
    EnvironmentError_,
    FormatError,
    HandshakeError,
    InsufficientData,
    InvalidProfile,
    IoError,
    MrSyntaxError,
    MrValidationError,
    MtError,
    ProtocolError,
    SignatureError,
    StaleConstraints,
)
from .suts import default_registry, load_external

_INVALID_INPUT = (InvalidProfile, ConfigError, FormatError, MrValidationError, MrSyntaxError,
                  IoError, InsufficientData, HandshakeError, SignatureError, ProtocolError)


def _fail(exc: BaseException) -> "NoReturn":  # noqa: F821
    click.echo(f"error: {exc}", err=True)
    if isinstance(exc, StaleConstraints):
        sys.exit(3)
    if isinstance(exc, EnvironmentError_):
        sys.exit(4)
    if isinstance(exc, _INVALID_INPUT):
        sys.exit(2)
    sys.exit(1)


def _write_or_env_error(fn, *args) -> None:
    try:
        fn(*args)
    except IoError as exc:
        raise EnvironmentError_(str(exc)) from exc


def _load_catalog_arg(name: str):
    if name == "builtin":
        return builtin_catalog()
    return load_catalog(name)


@click.group()
def main() -> None:
    """Metamorphic testing pipeline: generate data, run trials, mine
    constraints, evaluate mutants, serve the exploration API."""


@main.command("gen")
@click.option("--kind", default="list-float", show_default=True,
              type=click.Choice(["scalar-int", "scalar-float", "list-int", "list-float"]))
@click.option("--n", default=200, show_default=True, type=int, help="Total data across strata.")
@click.option("--seed", default=7, show_default=True, type=int)
@click.option("--len-min", default=1, show_default=True, type=int)
@click.option("--len-max", default=12, show_default=True, type=int)
@click.option("--lo", default=-100.0, show_default=True, type=float)
@click.option("--hi", default=100.0, show_default=True, type=float)
@click.option("--full-precision", is_flag=True,
              help="Draw full-precision floats instead of the 2-decimal grid.")
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def cmd_generate(kind, n, seed, len_min, len_max, lo, hi, full_precision, out) -> None:
    """Generate a stratified dataset (step 1)."""
    from dataclasses import replace

    try:
        profiles = [
            replace(p, len_range=(len_min, len_max), value_range=(lo, hi),
                    full_precision=full_precision)
            for p in datagen.default_profiles(n)
        ]
        data = datagen.stratify(kind, profiles, seed)
        out_path = Path(out)
        out_path.parent.mkdir(parents=True, exist_ok=True)
        _write_or_env_error(datagen.save_dataset, data, out_path)
        pipeline.update_manifest(out_path.parent, "gen", {
            "kind": kind,
            "n": n,
            "seed": seed,
            "profiles": pipeline.profiles_to_json(profiles),
            "dataset_file": out_path.name,
            "dataset_hash": pipeline.sha256_file(out_path),
        })
        click.echo(f"wrote {len(data)} data to {out_path}")
    except MtError as exc:
        _fail(exc)


@main.command("run")
@click.option("--suts", default="all", show_default=True,
              help="Comma-separated SUT ids, or 'all'.")
@click.option("--catalog", "catalog_name", default="builtin", show_default=True,
              help="'builtin' or a catalog JSON path.")
@click.option("--data", "data_path", required=True, type=click.Path(dir_okay=False))
@click.option("--bindings", default=3, show_default=True, type=int,
              help="Parameter bindings sampled per (MR, datum).")
@click.option("--seed", default=None, type=int,
              help="Campaign seed; defaults to the dataset manifest's gen seed.")
@click.option("--jobs", default=1, show_default=True, type=int)
@click.option("--external-manifest", default=None, type=click.Path(dir_okay=False),
              help="Optional manifest of external subprocess SUTs to add.")
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def cmd_run(suts, catalog_name, data_path, bindings, seed, jobs, external_manifest, out) -> None:
    """Execute MT trials over a dataset (step 2)."""
    try:
        registry = default_registry()
        if external_manifest:
            registry = registry.extend(load_external(external_manifest))
        catalog = _load_catalog_arg(catalog_name)
        dataset = datagen.load_dataset(data_path)
        out_path = Path(out)
        manifest = {}
        manifest_path = out_path.parent / pipeline.MANIFEST_NAME
        if manifest_path.exists():
            manifest = pipeline.read_manifest(out_path.parent)
        if seed is None:
            seed = manifest.get("gen", {}).get("seed", 0)
        sut_ids = tuple(s.id for s in registry.suts) if suts == "all" else \
            tuple(s.strip() for s in suts.split(",") if s.strip())
        config = executor.CampaignConfig(sut_ids=sut_ids, params_per_datum=bindings,
                                         seed=seed, jobs=jobs)
        result = executor.run_campaign(config, registry, catalog, dataset)
        out_path.parent.mkdir(parents=True, exist_ok=True)
        _write_or_env_error(executor.save_trials, result.records, out_path)
        pipeline.update_manifest(out_path.parent, "run", {
            "suts": list(sut_ids),
            "catalog": catalog_name,
            "catalog_hash": pipeline.catalog_hash(catalog),
            "dataset_file": Path(data_path).name,
            "dataset_hash": pipeline.sha256_file(data_path),
            "seed": seed,
            "params_per_datum": bindings,
            "trial_count": result.planned,
            "trials_file": out_path.name,
            "trials_hash": pipeline.sha256_file(out_path),
        })
        click.echo(f"wrote {result.planned} trials ({result.groups} groups) to {out_path}")
    except MtError as exc:
        _fail(exc)


@main.command("mine")
@click.option("--trials", "trials_path", required=True, type=click.Path(dir_okay=False))
@click.option("--min-support", default=5, show_default=True, type=int)
@click.option("--precision", default=1.0, show_default=True, type=float,
              help="Minimum precision a constraint must reach on evidence.")
@click.option("--max-results", default=16, show_default=True, type=int,
              help="Ranked candidates kept per (sut, mr) pair.")
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def cmd_mine(trials_path, min_support, precision, max_results, out) -> None:
    """Mine applicability constraints from a trial log (step 3)."""
    try:
        records = executor.load_trials(trials_path)
        if any(r.mutant_id is not None for r in records):
            raise ConfigError("trial log contains mutant records; mine on unmutated trials only")
        options = miner.MineOptions(min_support=min_support, min_precision=precision,
                                    max_results=max_results)
        verdicts = miner.analyze_trials(records, options)
        trials_dir = Path(trials_path).parent
        provenance = {"trials_hash": pipeline.sha256_file(trials_path)}
        manifest_path = trials_dir / pipeline.MANIFEST_NAME
        if manifest_path.exists():
            run_section = pipeline.read_manifest(trials_dir).get("run", {})
            provenance["catalog_hash"] = run_section.get("catalog_hash")
            provenance["dataset_hash"] = run_section.get("dataset_hash")
            provenance["seed"] = run_section.get("seed")
            provenance["params_per_datum"] = run_section.get("params_per_datum")
        doc = miner.report_to_json(verdicts, options, provenance)
        out_path = Path(out)
        out_path.parent.mkdir(parents=True, exist_ok=True)
        _write_or_env_error(miner.save_report, doc, out_path)
        pipeline.update_manifest(out_path.parent, "mine", {
            "options": doc["options"],
            "report_file": out_path.name,
            "report_hash": pipeline.sha256_file(out_path),
            "trials_hash": provenance["trials_hash"],
        })
        statuses = {}
        for v in verdicts:
            statuses[v.status] = statuses.get(v.status, 0) + 1
        click.echo(f"wrote {len(verdicts)} verdicts to {out_path} " +
                   " ".join(f"{k}={v}" for k, v in sorted(statuses.items())))
    except MtError as exc:
        _fail(exc)


@main.command("eval")
@click.option("--constraints", "constraints_path", required=True,
              type=click.Path(dir_okay=False))
@click.option("--mutants", default="all", show_default=True,
              help="'all' or comma-separated mutant ids.")
@click.option("--data", "data_path", default=None, type=click.Path(dir_okay=False),
              help="Dataset; defaults to the file named in the campaign manifest.")
@click.option("--catalog", "catalog_name", default=None,
              help="'builtin' or catalog path; defaults to the campaign manifest's.")
@click.option("--seed", default=None, type=int,
              help="Campaign seed; must match the mining campaign for comparability.")
@click.option("--bindings", default=None, type=int)
@click.option("--holdout-seed", default=None, type=int,
              help="Also compute false-positive rates on a fresh dataset.")
@click.option("--jobs", default=1, show_default=True, type=int)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def cmd_evaluate(constraints_path, mutants, data_path, catalog_name, seed, bindings,
                 holdout_seed, jobs, out) -> None:
    """Mutation analysis of constrained vs. unconstrained suites."""
    try:
        report_doc = miner.load_report(constraints_path)
        prov = report_doc.get("provenance", {})
        campaign_dir = Path(constraints_path).parent
        manifest = {}
        if (campaign_dir / pipeline.MANIFEST_NAME).exists():
            manifest = pipeline.read_manifest(campaign_dir)
        run_section = manifest.get("run", {})
        gen_section = manifest.get("gen", {})

        if data_path is None:
            name = run_section.get("dataset_file") or gen_section.get("dataset_file")
            if name is None:
                raise ConfigError("--data not given and no dataset recorded in the manifest")
            data_path = campaign_dir / name
        if catalog_name is None:
            catalog_name = run_section.get("catalog", "builtin")
        if seed is None:
            seed = prov.get("seed", run_section.get("seed"))
            if seed is None:
                raise ConfigError("--seed not given and no seed recorded in the constraint report")
        if bindings is None:
            bindings = prov.get("params_per_datum", run_section.get("params_per_datum", 3))

        catalog = _load_catalog_arg(catalog_name)
        dataset = datagen.load_dataset(data_path)
        mutation.check_provenance(report_doc, pipeline.catalog_hash(catalog),
                                  pipeline.sha256_file(data_path))

        registry = default_registry()
        mutant_ids = None if mutants == "all" else [m.strip() for m in mutants.split(",")]
        matrix, mutant_records = mutation.evaluate_mutants(
            registry, catalog, report_doc, dataset, seed,
            params_per_datum=bindings, jobs=jobs, mutant_ids=mutant_ids)

        regions = mutation.regions_from_report(report_doc)
        suts = sorted({sut for (sut, _) in regions})
        config = executor.CampaignConfig(sut_ids=tuple(suts), params_per_datum=bindings,
                                         seed=seed, jobs=jobs)
        baseline = executor.run_campaign(config, registry, catalog, dataset).records

        holdout_records = None
        holdout_info = None
        if holdout_seed is not None:
            n = len(dataset)
            profiles = pipeline.profiles_from_json(gen_section["profiles"]) \
                if gen_section.get("profiles") else datagen.default_profiles(n)
            holdout_data = datagen.stratify(gen_section.get("kind", "list-float"),
                                            profiles, holdout_seed)
            holdout_config = executor.CampaignConfig(sut_ids=tuple(suts),
                                                     params_per_datum=bindings,
                                                     seed=holdout_seed, jobs=jobs)
            holdout_records = executor.run_campaign(holdout_config, registry, catalog,
                                                    holdout_data).records
            holdout_info = {"seed": holdout_seed, "n": len(holdout_data)}

        report = mutation.score(matrix, regions, baseline, mutant_records, holdout_records,
                                provenance={
                                    "constraints_hash": pipeline.sha256_file(constraints_path),
                                    "catalog_hash": pipeline.catalog_hash(catalog),
                                    "dataset_hash": pipeline.sha256_file(data_path),
                                    "seed": seed,
                                    "holdout": holdout_info,
                                })
        out_path = Path(out)
        out_path.parent.mkdir(parents=True, exist_ok=True)
        _write_or_env_error(mutation.save_mutation_report, report.to_json_dict(matrix), out_path)
        pipeline.update_manifest(out_path.parent, "eval", {
            "seed": seed,
            "holdout_seed": holdout_seed,
            "report_file": out_path.name,
            "report_hash": pipeline.sha256_file(out_path),
        })
        click.echo(
            f"wrote mutation report to {out_path} scores="
            + " ".join(f"{m}:{report.scores[m]}" for m in mutation.MODES))
    except MtError as exc:
        _fail(exc)


@main.command("serve")
@click.option("--root", default=None, type=click.Path(file_okay=False),
              help="Campaign root directory; defaults to $MT_HOME or ./runs.")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8765, show_default=True, type=int)
def cmd_serve(root, host, port) -> None:
    """Serve the read/act HTTP API for the explorer UI."""
    import os

    import uvicorn

    from .server import create_app

    root = Path(root or os.environ.get("MT_HOME", "runs"))
    if not root.exists():
        _fail(ConfigError(f"campaign root {root} does not exist"))
    app = create_app(root)
    try:
        uvicorn.run(app, host=host, port=port, log_level="warning")
    except SystemExit as exc:  # uvicorn exits 1 when the port is taken
        if exc.code not in (0, None):
            _fail(EnvironmentError_(f"cannot serve on {host}:{port}"))
    except OSError as exc:
        _fail(EnvironmentError_(f"cannot serve on {host}:{port}: {exc}"))


def entry() -> None:  # pragma: no cover - console script shim
    main()


if __name__ == "__main__":  # pragma: no cover
    main()
