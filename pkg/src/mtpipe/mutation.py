"""Mutation analysis: run campaigns against seeded mutants with
unconstrained vs. constrained relation suites and compare kill power.

The constrained mode admits only trials whose features satisfy the mined
constraint for the (sut, mr) pair: APPLICABLE admits everything,
CONDITIONAL admits its region, INAPPLICABLE and UNDETERMINED admit
nothing (an unusable relation contributes no constrained verdicts). The
admitted set is therefore always a subset of the unconstrained one, which
makes kill sets monotone by construction. ERROR trials never kill: a
mutant that only ever crashes is flagged degenerate instead.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .catalog import Catalog
from .datagen import TestDatum
from .errors import FormatError, IoError, StaleConstraints
from .executor import ERROR, VIOLATED, CampaignConfig, TrialRecord, run_campaign
from .features import Atom, eval_atoms, extract_features
from .miner import APPLICABLE, CONDITIONAL
from .suts.registry import Registry

UNCONSTRAINED = "unconstrained"
CONSTRAINED = "constrained"
MODES = (UNCONSTRAINED, CONSTRAINED)

KILLED = "killed"
SURVIVED = "survived"
NO_DATA = "no-data"

RegionMap = dict[tuple[str, str], tuple[Atom, ...] | None]


@dataclass
class KillMatrix:
    mutants: tuple[str, ...]
    mutant_parent: dict[str, str]
    mr_ids: tuple[str, ...]
    cells: dict[tuple[str, str, str], str]  # (mutant, mr, mode) -> cell state
    degenerate: tuple[str, ...] = ()

    def cell(self, mutant_id: str, mr_id: str, mode: str) -> str:
        return self.cells.get((mutant_id, mr_id, mode), NO_DATA)

    def killed_mutants(self, mode: str) -> set[str]:
        return {m for (m, _, md), state in self.cells.items()
                if md == mode and state == KILLED}


@dataclass
class MutationReport:
    scores: dict
    totals: dict
    false_positive_rates: dict
    per_pair: dict
    degenerate_mutants: tuple[str, ...]
    provenance: dict = field(default_factory=dict)

    def to_json_dict(self, matrix: KillMatrix) -> dict:
        sparse = {"killed": [], "no_data": []}
        for (mutant, mr, mode), state in sorted(matrix.cells.items()):
            if state == KILLED:
                sparse["killed"].append({"mutant": mutant, "mr": mr, "mode": mode})
            elif state == NO_DATA:
                sparse["no_data"].append({"mutant": mutant, "mr": mr, "mode": mode})
        return {
            "scores": self.scores,
            "totals": self.totals,
            "false_positive_rates": self.false_positive_rates,
            "matrix": sparse,
            "mutants": list(matrix.mutants),
            "mr_ids": list(matrix.mr_ids),
            "per_pair": self.per_pair,
            "degenerate_mutants": list(self.degenerate_mutants),
            "provenance": self.provenance,
        }


def regions_from_report(report_doc: dict) -> RegionMap:
    """Admitted-region atoms per (sut, mr) from a constraint report."""
    regions: RegionMap = {}
    for v in report_doc.get("verdicts", []):
        key = (v["sut"], v["mr"])
        if v["status"] == APPLICABLE:
            regions[key] = ()
        elif v["status"] == CONDITIONAL and v.get("constraint"):
            regions[key] = tuple(Atom.from_json_dict(a) for a in v["constraint"]["atoms"])
        else:
            regions[key] = None
    return regions


def check_provenance(report_doc: dict, catalog_hash: str, dataset_hash: str) -> None:
    prov = report_doc.get("provenance", {})
    if prov.get("catalog_hash") != catalog_hash:
        raise StaleConstraints(
            f"catalog hash {catalog_hash} does not match constraint report "
            f"({prov.get('catalog_hash')})")
    if prov.get("dataset_hash") != dataset_hash:
        raise StaleConstraints(
            f"dataset hash {dataset_hash} does not match constraint report "
            f"({prov.get('dataset_hash')})")


def _admitted(records: list[TrialRecord], atoms: tuple[Atom, ...] | None) -> list[TrialRecord]:
    if atoms is None:
        return []
    if not atoms:
        return list(records)
    out = []
    for r in records:
        if eval_atoms(atoms, extract_features(r.source_input, r.param_binding)):
            out.append(r)
    return out


def evaluate_mutants(registry: Registry, catalog: Catalog, report_doc: dict,
                     dataset: list[TestDatum], seed: int,
                     params_per_datum: int = 3, jobs: int = 1,
                     mutant_ids: list[str] | None = None,
                     ) -> tuple[KillMatrix, list[TrialRecord]]:
    """Run every selected mutant against its matched relations and fill the
    kill matrix for both modes.

    The same dataset and seed as the mining campaign must be passed so the
    parameter bindings and permutations are comparable; provenance hashes
    are checked by the caller via check_provenance. Returns the matrix and
    the full mutant trial log.
    """
    regions = regions_from_report(report_doc)
    suts_in_report = sorted({sut for (sut, _) in regions})

    targets: list[tuple[str, str | None]] = []
    mutant_parent: dict[str, str] = {}
    for sut_id in suts_in_report:
        sut = registry.get(sut_id)
        if sut is None:
            continue
        for m in sut.mutants:
            if mutant_ids is not None and m.id not in mutant_ids:
                continue
            targets.append((sut_id, m.id))
            mutant_parent[m.id] = sut_id

    config = CampaignConfig(sut_ids=tuple(suts_in_report), params_per_datum=params_per_datum,
                            seed=seed, jobs=jobs)
    if targets:
        result = run_campaign(config, registry, catalog, dataset, targets=targets)
        records = result.records
    else:
        records = []

    by_group: dict[tuple[str, str], list[TrialRecord]] = {}
    for r in records:
        by_group.setdefault((r.mutant_id, r.mr_id), []).append(r)

    mr_ids = sorted({mr for (_, mr) in regions})
    cells: dict[tuple[str, str, str], str] = {}
    trials_seen: dict[str, int] = {m: 0 for m, _ in mutant_parent.items()}
    errors_seen: dict[str, int] = {m: 0 for m, _ in mutant_parent.items()}

    for (mutant_id, parent) in sorted(mutant_parent.items()):
        for mr_id in mr_ids:
            group = by_group.get((mutant_id, mr_id), [])
            if not group:
                continue
            trials_seen[mutant_id] += len(group)
            errors_seen[mutant_id] += sum(1 for r in group if r.verdict == ERROR)
            region = regions.get((parent, mr_id))
            for mode in MODES:
                atoms = () if mode == UNCONSTRAINED else region
                admitted = _admitted(group, atoms)
                evaluable = [r for r in admitted if r.verdict != ERROR]
                if not evaluable:
                    cells[(mutant_id, mr_id, mode)] = NO_DATA
                elif any(r.verdict == VIOLATED for r in evaluable):
                    cells[(mutant_id, mr_id, mode)] = KILLED
                else:
                    cells[(mutant_id, mr_id, mode)] = SURVIVED

    degenerate = tuple(sorted(
        m for m in mutant_parent
        if trials_seen[m] > 0 and errors_seen[m] == trials_seen[m]))

    matrix = KillMatrix(
        mutants=tuple(sorted(mutant_parent)),
        mutant_parent=mutant_parent,
        mr_ids=tuple(mr_ids),
        cells=cells,
        degenerate=degenerate,
    )
    return matrix, records


def false_positive_rates(baseline_records: list[TrialRecord], regions: RegionMap) -> dict:
    """Violation rate on unmutated subjects inside each mode's admitted
    region: VIOLATED in-region / admitted evaluable trials."""
    rates = {}
    for mode in MODES:
        admitted = 0
        violated = 0
        groups: dict[tuple[str, str], list[TrialRecord]] = {}
        for r in baseline_records:
            if r.mutant_id is not None:
                continue
            groups.setdefault((r.sut_id, r.mr_id), []).append(r)
        for key, group in groups.items():
            atoms = () if mode == UNCONSTRAINED else regions.get(key)
            for r in _admitted(group, atoms):
                if r.verdict == ERROR:
                    continue
                admitted += 1
                if r.verdict == VIOLATED:
                    violated += 1
        rates[mode] = {
            "admitted": admitted,
            "violated": violated,
            "rate": violated / admitted if admitted else None,
        }
    return rates


def score(matrix: KillMatrix, regions: RegionMap,
          baseline_records: list[TrialRecord],
          mutant_records: list[TrialRecord],
          holdout_records: list[TrialRecord] | None = None,
          provenance: dict | None = None) -> MutationReport:
    """Mutation scores, false-positive rates, and the per-pair breakdown.

    With zero mutants the scores are explicit nulls, not zero.
    """
    total = len(matrix.mutants)
    scores = {}
    totals = {"mutants": total}
    for mode in MODES:
        killed = matrix.killed_mutants(mode)
        totals[f"killed_{mode}"] = len(killed)
        scores[mode] = len(killed) / total if total else None

    fp = {"held_in": false_positive_rates(baseline_records, regions)}
    if holdout_records is not None:
        fp["held_out"] = false_positive_rates(holdout_records, regions)

    per_pair: dict[str, dict] = {}
    by_group: dict[tuple[str, str], list[TrialRecord]] = {}
    for r in mutant_records:
        by_group.setdefault((matrix.mutant_parent.get(r.mutant_id, r.sut_id), r.mr_id),
                            []).append(r)
    for (sut_id, mr_id), group in sorted(by_group.items()):
        entry = {}
        region = regions.get((sut_id, mr_id))
        for mode in MODES:
            atoms = () if mode == UNCONSTRAINED else region
            admitted = [r for r in _admitted(group, atoms) if r.verdict != ERROR]
            kills = sorted({r.mutant_id for r in admitted if r.verdict == VIOLATED})
            entry[mode] = {
                "admitted": len(admitted),
                "violated": sum(1 for r in admitted if r.verdict == VIOLATED),
                "kills": kills,
            }
        per_pair[f"{sut_id}:{mr_id}"] = entry

    return MutationReport(
        scores=scores,
        totals=totals,
        false_positive_rates=fp,
        per_pair=per_pair,
        degenerate_mutants=matrix.degenerate,
        provenance=dict(provenance or {}),
    )


def save_mutation_report(doc: dict, path: str | Path) -> None:
    try:
        Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write mutation report {path}: {exc}") from exc


def load_mutation_report(path: str | Path) -> dict:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise IoError(f"cannot read mutation report {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON: {exc}") from exc
    return doc
