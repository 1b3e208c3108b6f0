"""Trial execution: apply a bound relation's transform to source data,
invoke the subject on source and follow-up inputs, evaluate the output
relation, and log complete trial records.

Every random choice (parameter binding, permutation) derives from the
trial's seed path (campaign seed, datum id, binding index), so a record
is re-checkable in isolation and a campaign replays bit-for-bit at any
worker count. ERROR trials are retained in logs but never count as
violations.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .catalog import Catalog, match_mrs
from .datagen import TestDatum
from .errors import (
    ConfigError,
    EmptyListTransform,
    FormatError,
    IoError,
    NonFiniteOutput,
    ProtocolError,
    SutTimeout,
)
from .mrlang.ast import (
    BinOp,
    BoundMr,
    Expr,
    MrSpec,
    Num,
    RelationExpr,
    Sym,
    TolerancePolicy,
    instantiate_mr,
)
from .rng import SplitMix64, fnv64, mix64
from .suts.registry import MutantDescriptor, Registry, SutDescriptor, invoke

HOLDS = "HOLDS"
VIOLATED = "VIOLATED"
ERROR = "ERROR"

_PERMUTE_STREAM = 0x70
_BINDING_STREAM = 0x42


@dataclass(frozen=True)
class TrialRecord:
    trial_id: str
    sut_id: str
    mutant_id: str | None
    mr_id: str
    param_binding: dict
    source_input: object
    followup_input: object
    source_output: float | None
    followup_output: float | None
    verdict: str
    error_detail: str | None
    seed_path: tuple[int, int, int]

    def to_json_dict(self) -> dict:
        return {
            "trial_id": self.trial_id,
            "sut_id": self.sut_id,
            "mutant_id": self.mutant_id,
            "mr_id": self.mr_id,
            "param_binding": {k: self.param_binding[k] for k in sorted(self.param_binding)},
            "source_input": self.source_input,
            "followup_input": self.followup_input,
            "source_output": self.source_output,
            "followup_output": self.followup_output,
            "verdict": self.verdict,
            "error_detail": self.error_detail,
            "seed_path": list(self.seed_path),
        }

    @classmethod
    def from_json_dict(cls, raw: dict) -> "TrialRecord":
        return cls(
            trial_id=raw["trial_id"],
            sut_id=raw["sut_id"],
            mutant_id=raw.get("mutant_id"),
            mr_id=raw["mr_id"],
            param_binding=dict(raw.get("param_binding", {})),
            source_input=raw["source_input"],
            followup_input=raw.get("followup_input"),
            source_output=raw.get("source_output"),
            followup_output=raw.get("followup_output"),
            verdict=raw["verdict"],
            error_detail=raw.get("error_detail"),
            seed_path=tuple(raw.get("seed_path", (0, 0, 0))),
        )


@dataclass(frozen=True)
class CampaignConfig:
    sut_ids: tuple[str, ...]
    params_per_datum: int = 3
    seed: int = 0
    jobs: int = 1

    def validate(self) -> None:
        if self.params_per_datum < 1:
            raise ConfigError("params_per_datum must be >= 1")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")
        if not self.sut_ids:
            raise ConfigError("at least one SUT id required")


@dataclass
class CampaignResult:
    records: list[TrialRecord]
    planned: int
    groups: int


# transforms ----------------------------------------------------------------

def _permutation_rng(seed_path: tuple[int, int, int]) -> SplitMix64:
    seed, datum_id, binding_ix = seed_path
    return SplitMix64(mix64(seed, datum_id, binding_ix, _PERMUTE_STREAM))


def transform_input(bound: BoundMr, argument, seed_path: tuple[int, int, int]):
    """Apply the bound transform program to one source argument.

    Primitives run in order; ``permute`` draws a deterministic permutation
    from the seed path, so re-running with the recorded path reproduces
    the exact follow-up input. ``exclude-last`` on an empty list raises
    EmptyListTransform, which callers record as an ERROR trial.
    """
    binding = bound.binding_map
    is_list = bound.spec.input_kind.startswith("list")
    rng: SplitMix64 | None = None
    if is_list:
        current = list(argument)
    else:
        current = argument
    for prim in bound.spec.transform:
        if prim.op == "add":
            c = binding[prim.arg]
            current = [v + c for v in current] if is_list else current + c
        elif prim.op == "scale":
            k = binding[prim.arg]
            current = [v * k for v in current] if is_list else current * k
        elif prim.op == "negate":
            current = [-v for v in current] if is_list else -current
        elif prim.op == "permute":
            if rng is None:
                rng = _permutation_rng(seed_path)
            rng.shuffle(current)
        elif prim.op == "reverse":
            current = list(reversed(current))
        elif prim.op == "sort-ascending":
            current = sorted(current)
        elif prim.op == "include":
            current = current + [binding[prim.arg]]
        elif prim.op == "exclude-last":
            if not current:
                raise EmptyListTransform("exclude-last on an empty list")
            current = current[:-1]
        else:  # pragma: no cover - validator rejects unknown prims
            raise ConfigError(f"unknown primitive {prim.op!r}")
    return current


# relation evaluation --------------------------------------------------------

def eval_expr(expr: Expr, env: dict) -> float:
    if isinstance(expr, Num):
        return expr.value
    if isinstance(expr, Sym):
        try:
            return float(env[expr.name])
        except KeyError:
            raise ConfigError(f"relation references unbound symbol {expr.name!r}") from None
    left = eval_expr(expr.left, env)
    right = eval_expr(expr.right, env)
    if expr.op == "+":
        return left + right
    if expr.op == "-":
        return left - right
    if expr.op == "*":
        return left * right
    if right == 0.0:
        raise NonFiniteOutput("division by zero while evaluating relation")
    return left / right


def evaluate_relation(relation: RelationExpr, out_s: float, out_f: float,
                      binding: dict, n: int, tol: TolerancePolicy) -> str:
    """HOLDS/VIOLATED for one pair of outputs.

    Equality holds within max(abs, rel * max(|out_f|, |rhs|)); inequalities
    get the same slack in the satisfying direction only, so float noise
    cannot manufacture violations but real ones beyond tolerance stay
    visible.
    """
    if not (math.isfinite(out_s) and math.isfinite(out_f)):
        raise NonFiniteOutput("relation operand is not finite")
    env = dict(binding)
    env["out_s"] = out_s
    env["n"] = float(n)
    rhs = eval_expr(relation.right, env)
    if not math.isfinite(rhs):
        raise NonFiniteOutput("relation right-hand side is not finite")
    cmp = relation.comparator
    if cmp == "==":
        slack = max(tol.abs, tol.rel * max(abs(out_f), abs(rhs)))
        ok = abs(out_f - rhs) <= slack
    else:
        slack = max(tol.abs, tol.rel * abs(rhs))
        if cmp == ">=":
            ok = out_f >= rhs - slack
        elif cmp == "<=":
            ok = out_f <= rhs + slack
        elif cmp == ">":
            ok = out_f > rhs - slack
        else:
            ok = out_f < rhs + slack
    return HOLDS if ok else VIOLATED


# binding sampling -----------------------------------------------------------

def sample_binding(spec: MrSpec, seed: int, datum_id: int, binding_ix: int) -> dict:
    """Uniform draw from each parameter domain, derived from the seed path
    and the relation id so different relations see independent streams."""
    rng = SplitMix64(mix64(seed, datum_id, binding_ix, fnv64(spec.id), _BINDING_STREAM))
    binding: dict = {}
    for p in spec.params:
        dom = p.domain
        if p.kind == "int":
            lo = math.ceil(dom.lo)
            if dom.lo_open and lo == dom.lo:
                lo += 1
            hi = math.floor(dom.hi)
            if dom.hi_open and hi == dom.hi:
                hi -= 1
            if lo > hi:
                raise ConfigError(f"no integer points in domain of {p.name!r}")
            binding[p.name] = float(rng.next_int(lo, hi))
        else:
            value = dom.lo + rng.next_float() * (dom.hi - dom.lo)
            for _ in range(8):
                if dom.contains(value):
                    break
                value = dom.lo + rng.next_float() * (dom.hi - dom.lo)
            else:
                value = (dom.lo + dom.hi) / 2.0
            binding[p.name] = value
    return binding


# campaign -------------------------------------------------------------------

def _run_trial(sut: SutDescriptor, mutant: MutantDescriptor | None, spec: MrSpec,
               datum: TestDatum, binding_ix: int, seed: int) -> TrialRecord:
    binding = sample_binding(spec, seed, datum.datum_id, binding_ix)
    bound = instantiate_mr(spec, binding)
    seed_path = (seed, datum.datum_id, binding_ix)
    trial_id = f"{sut.id}:{mutant.id if mutant else '-'}:{spec.id}:{datum.datum_id}:{binding_ix}"
    source_input = datum.argument
    target = mutant if mutant is not None else sut

    followup_input = None
    out_s = out_f = None
    verdict = ERROR
    detail: str | None = None
    try:
        followup_input = transform_input(bound, source_input, seed_path)
    except EmptyListTransform as exc:
        detail = f"transform-error:{exc}"
    if detail is None:
        try:
            source_outcome = invoke(target, source_input, input_kind=sut.input_kind)
            if source_outcome.ok:
                out_s = source_outcome.value
            else:
                detail = f"source-error:{source_outcome.error}"
            if detail is None:
                followup_outcome = invoke(target, followup_input, input_kind=sut.input_kind)
                if followup_outcome.ok:
                    out_f = followup_outcome.value
                else:
                    detail = f"followup-error:{followup_outcome.error}"
        except (ProtocolError, SutTimeout, IoError) as exc:
            detail = f"invoke-error:{exc}"
    if detail is None:
        n = len(source_input) if isinstance(source_input, list) else 1
        try:
            verdict = evaluate_relation(spec.relation, out_s, out_f, binding, n, spec.tolerance)
        except NonFiniteOutput as exc:
            detail = f"relation-error:{exc}"

    return TrialRecord(
        trial_id=trial_id,
        sut_id=sut.id,
        mutant_id=mutant.id if mutant else None,
        mr_id=spec.id,
        param_binding=binding,
        source_input=source_input,
        followup_input=followup_input,
        source_output=out_s,
        followup_output=out_f,
        verdict=verdict if detail is None else ERROR,
        error_detail=detail,
        seed_path=seed_path,
    )


def _run_group(task) -> list[TrialRecord]:
    sut, mutant, spec, data, params_per_datum, seed = task
    records = []
    for datum in data:
        for binding_ix in range(params_per_datum):
            records.append(_run_trial(sut, mutant, spec, datum, binding_ix, seed))
    return records


def plan_groups(config: CampaignConfig, registry: Registry, catalog: Catalog,
                dataset: list[TestDatum],
                targets: list[tuple[str, str | None]] | None = None) -> list[tuple]:
    """Expand the campaign into (sut, mutant, mr) group tasks."""
    config.validate()
    if targets is None:
        targets = [(sut_id, None) for sut_id in config.sut_ids]
    tasks = []
    for sut_id, mutant_id in targets:
        sut = registry.get(sut_id)
        if sut is None:
            raise ConfigError(f"unknown SUT id {sut_id!r}")
        mutant = None
        if mutant_id is not None:
            mutant = sut.mutant(mutant_id)
            if mutant is None:
                raise ConfigError(f"unknown mutant {mutant_id!r} for SUT {sut_id!r}")
        for spec in match_mrs(catalog, sut):
            tasks.append((sut, mutant, spec, dataset, config.params_per_datum, config.seed))
    return tasks


def run_campaign(config: CampaignConfig, registry: Registry, catalog: Catalog,
                 dataset: list[TestDatum],
                 targets: list[tuple[str, str | None]] | None = None) -> CampaignResult:
    """Execute all planned trials and return records sorted by trial key.

    The worker count never affects output content: groups are independent
    and the merged log is sorted on (sut, mutant, mr, datum, binding).
    """
    tasks = plan_groups(config, registry, catalog, dataset, targets)
    planned = sum(len(t[3]) * t[4] for t in tasks)
    if config.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            chunks = list(pool.map(_run_group, tasks, chunksize=1))
    else:
        chunks = [_run_group(t) for t in tasks]
    records = [r for chunk in chunks for r in chunk]
    records.sort(key=lambda r: (r.sut_id, r.mutant_id or "-", r.mr_id,
                                r.seed_path[1], r.seed_path[2]))
    if len(records) != planned:  # pragma: no cover - internal invariant
        raise ConfigError(f"planned {planned} trials but produced {len(records)}")
    ids = {r.trial_id for r in records}
    if len(ids) != len(records):  # pragma: no cover - internal invariant
        raise ConfigError("duplicate trial ids in campaign")
    return CampaignResult(records=records, planned=planned, groups=len(tasks))


# trial log io ---------------------------------------------------------------

def trials_to_lines(records: list[TrialRecord]) -> list[str]:
    return [json.dumps(r.to_json_dict(), separators=(",", ":")) for r in records]


def save_trials(records: list[TrialRecord], path: str | Path) -> None:
    try:
        Path(path).write_text("".join(line + "\n" for line in trials_to_lines(records)),
                              encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write trial log {path}: {exc}") from exc


def load_trials(path: str | Path) -> list[TrialRecord]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read trial log {path}: {exc}") from exc
    records = []
    for ln, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            records.append(TrialRecord.from_json_dict(json.loads(line)))
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise FormatError(f"{path}:{ln}: bad trial line: {exc}") from exc
    return records
