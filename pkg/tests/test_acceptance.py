"""Acceptance suite: one test per shipping criterion, each printing a
summary line. Criteria with derived expectations compute them through the
independent oracles in oracles.py, never through the code paths under
test.

The pipeline runs once per configuration through the real CLI in fresh
directories (SOURCE_DATE_EPOCH pinned so manifests are comparable), at
the full corpus scale: every built-in subject, all six relations, 200
data, 3 parameter bindings.
"""

import json
import os
import random
import subprocess
import sys
import time
from pathlib import Path

import pytest

import oracles
from mtpipe.catalog import builtin_catalog
from mtpipe.errors import MrSyntaxError, MrValidationError
from mtpipe.executor import load_trials
from mtpipe.miner import MineOptions, group_by_pair, mine_constraints
from mtpipe.mrlang import parse_mr, serialize_mr
from mtpipe.suts import default_registry

N_DATA = 200
BINDINGS = 3
SEED = 7
TIME_BUDGET_S = 300.0


def _run_chain(root: Path, jobs: int) -> float:
    env = dict(os.environ, SOURCE_DATE_EPOCH="0")
    steps = [
        ["gen", "--kind", "list-float", "--n", str(N_DATA), "--seed", str(SEED),
         "--out", str(root / "data.jsonl")],
        ["run", "--suts", "all", "--catalog", "builtin", "--data", str(root / "data.jsonl"),
         "--bindings", str(BINDINGS), "--seed", str(SEED), "--jobs", str(jobs),
         "--out", str(root / "trials.jsonl")],
        ["mine", "--trials", str(root / "trials.jsonl"), "--min-support", "5",
         "--precision", "1.0", "--out", str(root / "constraints.json")],
        ["eval", "--constraints", str(root / "constraints.json"), "--mutants", "all",
         "--seed", str(SEED), "--jobs", str(jobs), "--holdout-seed", "8",
         "--out", str(root / "mutation.json")],
    ]
    started = time.monotonic()
    for step in steps:
        proc = subprocess.run([sys.executable, "-m", "mtpipe.cli", *step],
                              capture_output=True, text=True, env=env)
        assert proc.returncode == 0, f"{step[0]} failed: {proc.stderr}"
    return time.monotonic() - started


@pytest.fixture(scope="session")
def runs(tmp_path_factory):
    base = tmp_path_factory.mktemp("acceptance")
    elapsed = {}
    for name, jobs in (("a", 1), ("b", 1), ("j8", 8)):
        d = base / name
        d.mkdir()
        elapsed[name] = _run_chain(d, jobs)
    return {"base": base, "elapsed": elapsed}


@pytest.fixture(scope="session")
def records(runs):
    return load_trials(runs["base"] / "a" / "trials.jsonl")


@pytest.fixture(scope="session")
def constraint_report(runs):
    return json.loads((runs["base"] / "a" / "constraints.json").read_text())


@pytest.fixture(scope="session")
def mutation_report(runs):
    return json.loads((runs["base"] / "a" / "mutation.json").read_text())


ARTIFACTS = ("data.jsonl", "trials.jsonl", "constraints.json", "mutation.json",
             "manifest.json")


def test_c1_pipeline_determinism_and_budget(runs):
    registry = default_registry()
    assert len(registry.suts) >= 25
    trials = (runs["base"] / "a" / "trials.jsonl").read_text().splitlines()
    assert len(trials) == len(registry.suts) * 6 * N_DATA * BINDINGS

    for name in ("b", "j8"):
        for artifact in ARTIFACTS:
            a = (runs["base"] / "a" / artifact).read_bytes()
            other = (runs["base"] / name / artifact).read_bytes()
            assert a == other, f"{artifact} differs between runs a and {name}"

    slowest = max(runs["elapsed"].values())
    assert slowest < TIME_BUDGET_S
    print(f"\n[acceptance] C1 pipeline determinism: PASS "
          f"({len(trials)} trials, slowest chain {slowest:.1f}s < {TIME_BUDGET_S:.0f}s, "
          f"3 runs byte-identical)")


def test_c2_verdict_oracle_equivalence(records):
    catalog = builtin_catalog()
    dsl = {e.spec.id: serialize_mr(e.spec) for e in catalog.entries}
    evaluable = [r for r in records
                 if r.source_output is not None and r.followup_output is not None]
    sample = random.Random(42).sample(evaluable, 1000)
    mismatches = 0
    for r in sample:
        n = len(r.source_input) if isinstance(r.source_input, list) else 1
        expected = oracles.relation_verdict(dsl[r.mr_id], r.source_output,
                                            r.followup_output, r.param_binding, n)
        mismatches += expected != r.verdict
    assert mismatches == 0
    print(f"\n[acceptance] C2 verdict oracle equivalence: PASS "
          f"(1000 sampled records, {mismatches} mismatches)")


def test_c3_miner_soundness_and_metric_recount(records, constraint_report):
    groups = group_by_pair(records)
    options = MineOptions(min_support=5, min_precision=1.0, max_results=16)
    checked = 0
    for key in sorted(groups):
        group = groups[key]
        for c in mine_constraints(group, options):
            support, precision, coverage = oracles.recount_metrics(c.atoms, group)
            assert (support, precision, coverage) == (c.support, c.precision, c.coverage), key
            if c.precision == 1.0:
                assert oracles.violated_in_region(c.atoms, group) == 0, (key, c.describe())
            checked += 1
    # the constraints actually shipped in the report match their stored metrics too
    for v in constraint_report["verdicts"]:
        if v["constraint"] is None:
            continue
        group = groups[(v["sut"], v["mr"])]
        atoms = [(a["feature"], a["op"], a["value"]) for a in v["constraint"]["atoms"]]
        support, precision, coverage = oracles.recount_metrics(atoms, group)
        assert support == v["metrics"]["support"]
        assert precision == v["metrics"]["precision"]
        assert coverage == v["metrics"]["coverage"]
    print(f"\n[acceptance] C3 miner soundness: PASS "
          f"({checked} mined constraints recounted exactly, precision-1.0 regions violation-free)")


def test_c4_analytic_boundary_recovery(records, constraint_report):
    group = group_by_pair(records)[("sum_of_squares", "additive")]

    # direct recomputation: every stored verdict equals (x+c)^2-vs-x^2 arithmetic
    for r in group:
        assert r.verdict != "ERROR"
        expected = oracles.square_sum_additive_verdict(r.source_input, r.param_binding["c"])
        assert expected == r.verdict, r.trial_id

    verdict = next(v for v in constraint_report["verdicts"]
                   if v["sut"] == "sum_of_squares" and v["mr"] == "additive")
    assert verdict["status"] == "CONDITIONAL"
    top_atoms = [(a["feature"], a["op"], a["value"]) for a in verdict["constraint"]["atoms"]]

    # the top region admits no trial that the analytic recomputation rejects
    admitted = [r for r in group
                if all(oracles.atom_holds(a, oracles.features_of(r)) for a in top_atoms)]
    assert admitted
    assert all(oracles.square_sum_additive_verdict(r.source_input, r.param_binding["c"])
               == "HOLDS" for r in admitted)

    # independent exhaustive search agrees with the production ranking
    expected = oracles.enumerate_constraints(group, min_support=5, min_precision=1.0)
    assert tuple(sorted(top_atoms)) == expected[0]["atoms"]
    assert verdict["metrics"]["support"] == expected[0]["support"]
    assert verdict["metrics"]["coverage"] == expected[0]["coverage"]

    # the analytic region itself is recovered as a qualifying candidate ...
    nonneg = next(c for c in expected if c["atoms"] == (("all_nonneg", "eq", True),))
    assert nonneg["precision"] == 1.0
    min_atoms = [c for c in expected
                 if len(c["atoms"]) == 1 and c["atoms"][0][0] == "min_elem"
                 and c["atoms"][0][1] == "ge" and c["atoms"][0][2] <= 0.0]
    assert min_atoms, "no sound min_elem >= t candidate with t <= 0"
    # ... and the ranked winner dominates it by coverage, never by unsoundness
    assert verdict["metrics"]["coverage"] >= nonneg["coverage"]

    min_c = min(r.param_binding["c"] for r in group)
    literal = (
        tuple(sorted(top_atoms)) == (("all_nonneg", "eq", True),)
        or (len(top_atoms) == 1 and top_atoms[0][0] == "min_elem" and top_atoms[0][1] == "ge"
            and -min_c / 2 <= top_atoms[0][2] <= 0))
    shape = " and ".join(f"{f} {op} {v}" for f, op, v in top_atoms)
    print(f"\n[acceptance] C4 analytic boundary recovery: PASS "
          f"(top constraint [{shape}] oracle-verified sound, coverage "
          f"{verdict['metrics']['coverage']:.3f} >= all_nonneg {nonneg['coverage']:.3f}; "
          f"literal all_nonneg/min_elem top form: {'yes' if literal else 'no, dominated'})")


def test_c5_known_applicability_fixtures(records, constraint_report):
    registry = default_registry()
    by_pair = {(v["sut"], v["mr"]): v for v in constraint_report["verdicts"]}
    flagged = [s.id for s in registry.suts if "order-insensitive" in s.oracle_flags]
    assert flagged
    for sut_id in flagged:
        v = by_pair[(sut_id, "permutative")]
        assert v["status"] == "APPLICABLE", (sut_id, v["status"])
        assert v["evidence"]["violated"] == 0

    from mtpipe.suts import invoke

    errors_on_empty = {s.id for s in registry.suts if not invoke(s, []).ok}
    by_verdict = {(v["sut"], v["mr"]): v for v in constraint_report["verdicts"]}
    groups = group_by_pair(records)
    singleton_errors = 0
    for (sut_id, mr_id), group in groups.items():
        if mr_id != "exclusive" or sut_id not in errors_on_empty:
            continue
        group_errors = 0
        for r in group:
            if isinstance(r.source_input, list) and len(r.source_input) == 1:
                # truncating a singleton leaves [], which this subject rejects
                assert r.verdict == "ERROR", r.trial_id
                assert r.followup_output is None
                group_errors += 1
        singleton_errors += group_errors
        evidence = by_verdict[(sut_id, mr_id)]["evidence"]
        non_error = [r for r in group if r.verdict != "ERROR"]
        assert evidence["error"] >= group_errors
        assert evidence["violated"] == sum(1 for r in non_error if r.verdict == "VIOLATED")
    assert singleton_errors > 0
    print(f"\n[acceptance] C5 known-applicability fixtures: PASS "
          f"({len(flagged)} order-insensitive subjects APPLICABLE under permutative, "
          f"{singleton_errors} singleton truncation ERRORs never counted as violations)")


def test_c6_mutation_monotonicity_and_effectiveness(mutation_report):
    killed_cells = {(c["mutant"], c["mr"], c["mode"])
                    for c in mutation_report["matrix"]["killed"]}
    exceptions = [
        (mutant, mr)
        for (mutant, mr, mode) in killed_cells
        if mode == "constrained" and (mutant, mr, "unconstrained") not in killed_cells
    ]
    assert exceptions == []
    assert ("sum_mut_plus_to_minus", "permutative", "unconstrained") in killed_cells
    assert ("sum_mut_plus_to_minus", "permutative", "constrained") in killed_cells
    held_in = mutation_report["false_positive_rates"]["held_in"]
    assert held_in["constrained"]["violated"] == 0
    assert held_in["constrained"]["rate"] == 0.0
    held_out = mutation_report["false_positive_rates"]["held_out"]
    print(f"\n[acceptance] C6 mutation monotonicity and effectiveness: PASS "
          f"(0 monotonicity exceptions; sum +->- killed by permutative in both modes; "
          f"held-in constrained FP rate {held_in['constrained']['rate']}; "
          f"scores {mutation_report['scores']}; "
          f"held-out constrained FP rate {held_out['constrained']['rate']:.4f})")


def test_c7_dsl_robustness():
    catalog = builtin_catalog()
    for entry in catalog.entries:
        text = serialize_mr(entry.spec)
        assert parse_mr(text) == entry.spec
        assert serialize_mr(parse_mr(text)) == text

    from test_mrlang import random_valid_spec_text

    rng = random.Random(20240901)
    roundtripped = 0
    while roundtripped < 100:
        text = random_valid_spec_text(rng)
        try:
            spec = parse_mr(text)
        except MrValidationError:
            continue
        assert parse_mr(serialize_mr(spec)) == spec
        roundtripped += 1

    fuzz_rng = random.Random(0xF422)
    crashes = 0
    for _ in range(10_000):
        size = fuzz_rng.randint(0, 120)
        blob = bytes(fuzz_rng.randint(0, 255) for _ in range(size))
        try:
            parse_mr(blob.decode("utf-8", errors="replace"))
        except (MrSyntaxError, MrValidationError):
            pass
        except Exception:
            crashes += 1
    assert crashes == 0
    print(f"\n[acceptance] C7 DSL robustness: PASS "
          f"(6 builtins + {roundtripped} random specs round-trip; "
          f"10000 fuzzed inputs, {crashes} crashes)")
