"""Constraint mining over trial logs: find input-space regions where a
relation holds, classify (SUT, MR) applicability, and explain verdicts.

The search is exhaustive over 0-, 1- and 2-atom conjunctions whose
thresholds are values observed in the trial set; no invented cut points.
Candidates are ranked by (coverage desc, atom count asc, support desc,
lexicographic atoms) which is a strict total order, so mining is
deterministic regardless of kernel backend or enumeration order. Pairs
combining two atoms of the same feature and direction are skipped: such a
conjunction is always equivalent to its tighter atom, which the search
already visits.

ERROR trials never enter the positive or negative class; they are counted
and surfaced through explanations (they often mark genuine inapplicability,
e.g. truncation of singleton lists).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from ._kernels import scan_pairs
from .errors import FormatError, InsufficientData, IoError
from .executor import ERROR, HOLDS, VIOLATED, TrialRecord
from .features import (
    BASE_FLAGS,
    EQ,
    GE,
    LE,
    Atom,
    eval_atoms,
    extract_features,
    numeric_feature_names,
)

APPLICABLE = "APPLICABLE"
CONDITIONAL = "CONDITIONAL"
INAPPLICABLE = "INAPPLICABLE"
UNDETERMINED = "UNDETERMINED"


@dataclass(frozen=True)
class MineOptions:
    min_support: int = 5
    min_precision: float = 1.0
    max_results: int | None = None


@dataclass(frozen=True)
class Constraint:
    atoms: tuple[Atom, ...]
    support: int
    precision: float
    coverage: float
    holds_in: int = field(default=0, compare=False)

    def describe(self) -> str:
        return " and ".join(str(a) for a in self.atoms) if self.atoms else "always"

    def to_json_dict(self) -> dict:
        return {"atoms": [a.to_json_dict() for a in self.atoms]}

    def metrics_dict(self) -> dict:
        return {"support": self.support, "precision": self.precision, "coverage": self.coverage}


@dataclass(frozen=True)
class Explanation:
    template_id: str
    text: str
    witness_holds: tuple[str, ...] = ()
    witness_violated: tuple[str, ...] = ()
    boundary_feature: str | None = None
    boundary_value: object = None
    counts: dict = field(default_factory=dict)
    rejected: dict | None = None

    def to_json_dict(self) -> dict:
        return {
            "template_id": self.template_id,
            "text": self.text,
            "witness_holds": list(self.witness_holds),
            "witness_violated": list(self.witness_violated),
            "boundary_feature": self.boundary_feature,
            "boundary_value": self.boundary_value,
            "counts": dict(self.counts),
            "rejected": self.rejected,
        }


@dataclass(frozen=True)
class MrSutVerdict:
    sut_id: str
    mr_id: str
    status: str
    constraint: Constraint | None
    evidence: dict
    explanation: Explanation

    def to_json_dict(self) -> dict:
        return {
            "sut": self.sut_id,
            "mr": self.mr_id,
            "status": self.status,
            "constraint": self.constraint.to_json_dict() if self.constraint else None,
            "metrics": self.constraint.metrics_dict() if self.constraint else None,
            "evidence": dict(self.evidence),
            "explanation": self.explanation.to_json_dict(),
        }


# feature table --------------------------------------------------------------

class _GroupView:
    """Feature matrix and verdict flags for one (sut, mr) group."""

    def __init__(self, trials: list[TrialRecord]):
        self.trials = trials
        self.non_error = [t for t in trials if t.verdict != ERROR]
        self.error_count = len(trials) - len(self.non_error)
        self.fvs = [extract_features(t.source_input, t.param_binding) for t in self.non_error]
        self.holds = np.array([t.verdict == HOLDS for t in self.non_error], dtype=bool)
        self.total = len(self.non_error)
        self.total_holds = int(self.holds.sum())
        self.total_violated = self.total - self.total_holds


def _pack_bits(rows: np.ndarray) -> np.ndarray:
    """Pack a (rows, trials) bool matrix into little-endian uint64 words."""
    if rows.ndim == 1:
        rows = rows[np.newaxis, :]
    packed = np.packbits(rows, axis=1, bitorder="little")
    pad = (-packed.shape[1]) % 8
    if pad:
        packed = np.pad(packed, ((0, 0), (0, pad)))
    return np.ascontiguousarray(packed).view(np.uint64)


def _build_atoms(view: _GroupView) -> tuple[list[Atom], np.ndarray, np.ndarray]:
    """All candidate atoms with their bool masks and family ids."""
    atoms: list[Atom] = []
    masks: list[np.ndarray] = []
    families: list[int] = []
    family = 0
    n = view.total

    for name in numeric_feature_names(view.fvs):
        vals = np.array(
            [fv.get(name) if fv.get(name) is not None else np.nan for fv in view.fvs],
            dtype=np.float64,
        )
        finite = vals[np.isfinite(vals)]
        if finite.size == 0:
            continue
        thresholds = np.unique(finite)
        ge_masks = vals[np.newaxis, :] >= thresholds[:, np.newaxis]
        le_masks = vals[np.newaxis, :] <= thresholds[:, np.newaxis]
        for t_ix, t in enumerate(thresholds):
            atoms.append(Atom(name, GE, float(t)))
            masks.append(ge_masks[t_ix])
            families.append(family)
        family += 1
        for t_ix, t in enumerate(thresholds):
            atoms.append(Atom(name, LE, float(t)))
            masks.append(le_masks[t_ix])
            families.append(family)
        family += 1

    for name in BASE_FLAGS:
        vals = np.array([bool(fv.get(name)) for fv in view.fvs], dtype=bool)
        for flag_value in (True, False):
            atoms.append(Atom(name, EQ, flag_value))
            masks.append(vals if flag_value else ~vals)
            families.append(family)
        family += 1

    if not atoms:
        return [], np.zeros((0, max(1, (n + 63) // 64)), dtype=np.uint64), np.zeros(0, np.int64)
    mask_matrix = np.array(masks, dtype=bool)
    return atoms, _pack_bits(mask_matrix), np.array(families, dtype=np.int64)


def _rank_key(holds_in: int, atoms: tuple[Atom, ...], support: int) -> tuple:
    return (-holds_in, len(atoms), -support, tuple(a.sort_key() for a in atoms))


def _make_constraint(atoms: tuple[Atom, ...], support: int, holds_in: int,
                     total_holds: int) -> Constraint:
    return Constraint(
        atoms=atoms,
        support=support,
        precision=holds_in / support if support else 0.0,
        coverage=holds_in / total_holds if total_holds else 0.0,
        holds_in=holds_in,
    )


def mine_constraints(trials: list[TrialRecord], options: MineOptions = MineOptions()) -> list[Constraint]:
    """Ranked constraint candidates for one (sut, mr) trial group.

    Raises InsufficientData when fewer than min_support non-ERROR trials
    exist. The trivial empty conjunction participates like any other
    candidate, so an all-HOLDS group returns it at rank 0 with coverage 1.
    """
    view = _GroupView(trials)
    if view.total < options.min_support:
        raise InsufficientData(
            f"{view.total} non-ERROR trials < min_support {options.min_support}")
    return _mine_view(view, options)


def _mine_view(view: _GroupView, options: MineOptions) -> list[Constraint]:
    atoms, masks, families = _build_atoms(view)
    holds_packed = _pack_bits(view.holds)[0]
    n_atoms = len(atoms)

    if n_atoms:
        from ._kernels.pairscan_py import _popcount_rows

        sup = _popcount_rows(masks)
        hin = _popcount_rows(masks & holds_packed[np.newaxis, :])
    else:
        sup = np.zeros(0, dtype=np.int64)
        hin = np.zeros(0, dtype=np.int64)

    def qualifies(support: int, holds_in: int) -> bool:
        if support < options.min_support or support == 0:
            return False
        return holds_in / support >= options.min_precision

    candidates: list[Constraint] = []
    if qualifies(view.total, view.total_holds):
        candidates.append(_make_constraint((), view.total, view.total_holds, view.total_holds))
    for ix in range(n_atoms):
        if qualifies(int(sup[ix]), int(hin[ix])):
            candidates.append(_make_constraint((atoms[ix],), int(sup[ix]), int(hin[ix]),
                                               view.total_holds))

    bound = 0
    if options.max_results is not None and len(candidates) >= options.max_results:
        ranked = sorted(candidates, key=lambda c: _rank_key(c.holds_in, c.atoms, c.support))
        bound = ranked[options.max_results - 1].holds_in

    if n_atoms:
        order = np.argsort(-hin, kind="stable").astype(np.int64)
        pi, pj, psup, phin = scan_pairs(masks, holds_packed, families, order, sup, hin,
                                        options.min_support, options.min_precision, bound)
        for i, j, s, h in zip(pi.tolist(), pj.tolist(), psup.tolist(), phin.tolist()):
            if not qualifies(s, h):  # pragma: no cover - kernel already filters
                continue
            pair = tuple(sorted((atoms[i], atoms[j]), key=Atom.sort_key))
            candidates.append(_make_constraint(pair, s, h, view.total_holds))

    candidates.sort(key=lambda c: _rank_key(c.holds_in, c.atoms, c.support))
    if options.max_results is not None:
        candidates = candidates[: options.max_results]
    return candidates


# classification ---------------------------------------------------------------

def classify(trials: list[TrialRecord], mined: list[Constraint],
             options: MineOptions = MineOptions()) -> MrSutVerdict:
    """Applicability verdict for one (sut, mr) group.

    APPLICABLE requires zero violated trials, INAPPLICABLE zero holding
    ones; mixed evidence is CONDITIONAL when a mined constraint met the
    thresholds and UNDETERMINED otherwise.
    """
    if not trials:
        raise ValueError("classify needs at least one trial")
    sut_id = trials[0].sut_id
    mr_id = trials[0].mr_id
    view = _GroupView(trials)
    evidence = {"holds": view.total_holds, "violated": view.total_violated,
                "error": view.error_count}

    if view.total_holds > 0 and view.total_violated == 0:
        status = APPLICABLE
        constraint = mined[0] if mined else _make_constraint((), view.total, view.total_holds,
                                                             view.total_holds)
    elif view.total_violated > 0 and view.total_holds == 0:
        status = INAPPLICABLE
        constraint = None
    elif view.total == 0:
        status = UNDETERMINED
        constraint = None
    elif mined:
        status = CONDITIONAL
        constraint = mined[0]
    else:
        status = UNDETERMINED
        constraint = None

    bare = MrSutVerdict(
        sut_id=sut_id,
        mr_id=mr_id,
        status=status,
        constraint=constraint,
        evidence=evidence,
        explanation=Explanation(template_id="pending", text=""),
    )
    return replace(bare, explanation=explain(bare, trials, options))


def apply_constraint(constraint: Constraint | tuple[Atom, ...],
                     trials: list[TrialRecord]) -> tuple[list[TrialRecord], list[TrialRecord]]:
    """Partition trials into (in_region, out_region) by atom evaluation on
    each trial's feature vector."""
    atoms = constraint.atoms if isinstance(constraint, Constraint) else tuple(constraint)
    inside: list[TrialRecord] = []
    outside: list[TrialRecord] = []
    for t in trials:
        fv = extract_features(t.source_input, t.param_binding)
        (inside if eval_atoms(atoms, fv) else outside).append(t)
    return inside, outside


def constraint_metrics(atoms: tuple[Atom, ...], trials: list[TrialRecord]) -> dict:
    """Support/precision/coverage of an ad-hoc atom conjunction over a
    group, plus the admitted trial ids (ERROR trials excluded from all
    three metrics)."""
    non_error = [t for t in trials if t.verdict != ERROR]
    total_holds = sum(1 for t in non_error if t.verdict == HOLDS)
    support = 0
    holds_in = 0
    in_ids: list[str] = []
    for t in non_error:
        fv = extract_features(t.source_input, t.param_binding)
        if eval_atoms(atoms, fv):
            support += 1
            in_ids.append(t.trial_id)
            if t.verdict == HOLDS:
                holds_in += 1
    return {
        "support": support,
        "precision": holds_in / support if support else 0.0,
        "coverage": holds_in / total_holds if total_holds else 0.0,
        "in_region_trial_ids": in_ids,
        "errors_excluded": len(trials) - len(non_error),
    }


# explanation ------------------------------------------------------------------

def _boundary_atom(constraint: Constraint | None) -> Atom | None:
    if constraint is None or not constraint.atoms:
        return None
    numeric = [a for a in constraint.atoms if a.op in (GE, LE)]
    return numeric[0] if numeric else constraint.atoms[0]


def _witnesses(trials: list[TrialRecord], verdict_kind: str, atom: Atom | None,
               limit: int = 3) -> tuple[str, ...]:
    pool = [t for t in trials if t.verdict == verdict_kind]

    def distance(t: TrialRecord) -> float:
        if atom is None:
            return 0.0
        fv = extract_features(t.source_input, t.param_binding)
        value = fv.get(atom.feature)
        if value is None:
            return float("inf")
        if atom.op == EQ:
            return 0.0 if bool(value) is bool(atom.value) else 1.0
        return abs(float(value) - float(atom.value))

    pool.sort(key=lambda t: (distance(t), t.trial_id))
    return tuple(t.trial_id for t in pool[:limit])


def explain(verdict: MrSutVerdict, trials: list[TrialRecord],
            options: MineOptions = MineOptions()) -> Explanation:
    """Structured rationale: counts, boundary, and up to three holding and
    three violating witness trials nearest the constraint boundary."""
    counts = dict(verdict.evidence)
    atom = _boundary_atom(verdict.constraint)

    if verdict.status == APPLICABLE:
        text = (f"relation held on all {counts['holds']} evaluable trials"
                f" ({counts['error']} errors excluded)")
        return Explanation(
            template_id="applicable",
            text=text,
            witness_holds=_witnesses(trials, HOLDS, None),
            counts=counts,
        )
    if verdict.status == INAPPLICABLE:
        text = (f"relation violated on all {counts['violated']} evaluable trials"
                f" ({counts['error']} errors excluded)")
        return Explanation(
            template_id="inapplicable",
            text=text,
            witness_violated=_witnesses(trials, VIOLATED, None),
            counts=counts,
        )
    if verdict.status == CONDITIONAL:
        c = verdict.constraint
        text = (f"relation holds on {c.holds_in}/{c.support} trials where {c.describe()};"
                f" region captures {c.coverage:.1%} of all holding trials")
        return Explanation(
            template_id="conditional-boundary",
            text=text,
            witness_holds=_witnesses(trials, HOLDS, atom),
            witness_violated=_witnesses(trials, VIOLATED, atom),
            boundary_feature=atom.feature if atom else None,
            boundary_value=atom.value if atom else None,
            counts=counts,
        )

    # UNDETERMINED: report the best candidate that failed the thresholds
    rejected = None
    non_error = counts["holds"] + counts["violated"]
    if non_error >= max(options.min_support, 1):
        relaxed = MineOptions(min_support=options.min_support, min_precision=0.0, max_results=1)
        best = _mine_view(_GroupView(trials), relaxed)
        if best:
            rejected = {
                "constraint": best[0].to_json_dict(),
                "metrics": best[0].metrics_dict(),
                "reason": (f"precision {best[0].precision:.3f} below required "
                           f"{options.min_precision:.3f}"),
            }
    if non_error == 0:
        reason = "no evaluable trials (all ERROR)"
    elif rejected is None:
        reason = f"fewer than {options.min_support} evaluable trials"
    else:
        reason = rejected["reason"]
    text = (f"mixed verdicts ({counts['holds']} holds, {counts['violated']} violated,"
            f" {counts['error']} errors) and no constraint met the thresholds: {reason}")
    return Explanation(
        template_id="undetermined-no-candidate",
        text=text,
        witness_holds=_witnesses(trials, HOLDS, None),
        witness_violated=_witnesses(trials, VIOLATED, None),
        counts=counts,
        rejected=rejected,
    )


# group driver and report io ----------------------------------------------------

def group_by_pair(records: list[TrialRecord]) -> dict[tuple[str, str], list[TrialRecord]]:
    groups: dict[tuple[str, str], list[TrialRecord]] = {}
    for r in records:
        groups.setdefault((r.sut_id, r.mr_id), []).append(r)
    return groups


def analyze_trials(records: list[TrialRecord],
                   options: MineOptions = MineOptions()) -> list[MrSutVerdict]:
    """Mine and classify every (sut, mr) group in a trial log."""
    verdicts = []
    groups = group_by_pair(records)
    for (sut_id, mr_id) in sorted(groups):
        group = groups[(sut_id, mr_id)]
        try:
            mined = mine_constraints(group, options)
        except InsufficientData:
            mined = []
        verdicts.append(classify(group, mined, options))
    return verdicts


def report_to_json(verdicts: list[MrSutVerdict], options: MineOptions,
                   provenance: dict | None = None) -> dict:
    return {
        "verdicts": [v.to_json_dict() for v in verdicts],
        "options": {
            "min_support": options.min_support,
            "min_precision": options.min_precision,
            "max_results": options.max_results,
        },
        "provenance": dict(provenance or {}),
    }


def save_report(doc: dict, path: str | Path) -> None:
    try:
        Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write constraint report {path}: {exc}") from exc


def load_report(path: str | Path) -> dict:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise IoError(f"cannot read constraint report {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "verdicts" not in doc:
        raise FormatError(f"{path}: constraint report must contain 'verdicts'")
    return doc
