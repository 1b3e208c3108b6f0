import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from mtpipe.cli import main


@pytest.fixture()
def runner(monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "0")
    return CliRunner()


def _gen(runner, out: Path, n=24, seed=7, extra=()):
    return runner.invoke(main, ["gen", "--kind", "list-float", "--n", str(n),
                                "--seed", str(seed), "--out", str(out), *extra])


def _pipeline(runner, root: Path, suts="sum,sum_of_squares", n=24, jobs=1):
    data = root / "data.jsonl"
    trials = root / "trials.jsonl"
    constraints = root / "constraints.json"
    mutation = root / "mutation.json"
    r = _gen(runner, data, n=n)
    assert r.exit_code == 0, r.output
    r = runner.invoke(main, ["run", "--suts", suts, "--catalog", "builtin",
                             "--data", str(data), "--bindings", "2",
                             "--jobs", str(jobs), "--out", str(trials)])
    assert r.exit_code == 0, r.output
    r = runner.invoke(main, ["mine", "--trials", str(trials), "--min-support", "5",
                             "--precision", "1.0", "--out", str(constraints)])
    assert r.exit_code == 0, r.output
    r = runner.invoke(main, ["eval", "--constraints", str(constraints), "--mutants", "all",
                             "--out", str(mutation)])
    assert r.exit_code == 0, r.output
    return data, trials, constraints, mutation


def test_gen_writes_expected_lines(runner, tmp_path):
    out = tmp_path / "runs/a/data.jsonl"
    result = _gen(runner, out, n=24)
    assert result.exit_code == 0, result.output
    lines = out.read_text().splitlines()
    assert len(lines) == 24
    assert json.loads(lines[0])["datum_id"] == 0
    manifest = json.loads((out.parent / "manifest.json").read_text())
    assert manifest["gen"]["seed"] == 7
    assert manifest["campaign_id"]


def test_gen_rerun_is_byte_identical(runner, tmp_path):
    a = tmp_path / "a/data.jsonl"
    b = tmp_path / "b/data.jsonl"
    assert _gen(runner, a).exit_code == 0
    assert _gen(runner, b).exit_code == 0
    assert a.read_bytes() == b.read_bytes()


def test_gen_rejects_zero_n(runner, tmp_path):
    result = _gen(runner, tmp_path / "x.jsonl", n=0)
    assert result.exit_code == 2


def test_run_trial_count_arithmetic(runner, tmp_path):
    data, trials, _, _ = _pipeline(runner, tmp_path, suts="sum", n=10)
    lines = trials.read_text().splitlines()
    assert len(lines) == 6 * 10 * 2  # six relations, ten data, two bindings


def test_run_unknown_sut_exits_2(runner, tmp_path):
    data = tmp_path / "data.jsonl"
    assert _gen(runner, data, n=4).exit_code == 0
    result = runner.invoke(main, ["run", "--suts", "nonexistent", "--data", str(data),
                                  "--out", str(tmp_path / "t.jsonl")])
    assert result.exit_code == 2


def test_jobs_do_not_change_bytes(runner, tmp_path):
    _, trials1, _, _ = _pipeline(runner, tmp_path / "j1", jobs=1)
    _, trials8, _, _ = _pipeline(runner, tmp_path / "j8", jobs=8)
    assert trials1.read_bytes() == trials8.read_bytes()


def test_full_chain_reruns_byte_identical(runner, tmp_path):
    artifacts_a = _pipeline(runner, tmp_path / "a")
    artifacts_b = _pipeline(runner, tmp_path / "b")
    for pa, pb in zip(artifacts_a, artifacts_b):
        assert pa.read_bytes() == pb.read_bytes(), pa.name
    assert (tmp_path / "a/manifest.json").read_bytes() == \
        (tmp_path / "b/manifest.json").read_bytes()


def test_mine_rejects_mutant_logs(runner, tmp_path):
    data, trials, _, _ = _pipeline(runner, tmp_path, suts="sum", n=8)
    # splice one mutant record into the log
    lines = trials.read_text().splitlines()
    doctored = json.loads(lines[0])
    doctored["mutant_id"] = "sum_mut_plus_to_minus"
    lines.append(json.dumps(doctored))
    bad = tmp_path / "bad_trials.jsonl"
    bad.write_text("\n".join(lines) + "\n")
    result = runner.invoke(main, ["mine", "--trials", str(bad),
                                  "--out", str(tmp_path / "c.json")])
    assert result.exit_code == 2
    assert "mutant" in result.output


def test_eval_detects_tampered_dataset(runner, tmp_path):
    data, trials, constraints, _ = _pipeline(runner, tmp_path)
    content = data.read_text().splitlines()
    first = json.loads(content[0])
    first["values"][0][0] = 12345.0
    content[0] = json.dumps(first, separators=(",", ":"))
    data.write_text("\n".join(content) + "\n")
    result = runner.invoke(main, ["eval", "--constraints", str(constraints),
                                  "--out", str(tmp_path / "m2.json")])
    assert result.exit_code == 3


def test_eval_holdout_section(runner, tmp_path):
    data, trials, constraints, _ = _pipeline(runner, tmp_path, suts="sum", n=12)
    out = tmp_path / "mutation_holdout.json"
    result = runner.invoke(main, ["eval", "--constraints", str(constraints),
                                  "--holdout-seed", "8", "--out", str(out)])
    assert result.exit_code == 0, result.output
    doc = json.loads(out.read_text())
    assert "held_out" in doc["false_positive_rates"]
    assert doc["false_positive_rates"]["held_in"]["constrained"]["rate"] == 0.0


def test_constraint_report_shape(runner, tmp_path):
    _, _, constraints, _ = _pipeline(runner, tmp_path, suts="sum_of_squares", n=16)
    doc = json.loads(constraints.read_text())
    assert {"verdicts", "options", "provenance"} <= set(doc)
    verdict = doc["verdicts"][0]
    assert {"sut", "mr", "status", "constraint", "metrics", "evidence",
            "explanation"} <= set(verdict)
    if verdict["constraint"] is not None:
        assert "atoms" in verdict["constraint"]
        assert {"support", "precision", "coverage"} == set(verdict["metrics"])


def test_mutation_report_shape(runner, tmp_path):
    *_, mutation = _pipeline(runner, tmp_path, suts="sum", n=12)
    doc = json.loads(mutation.read_text())
    assert {"scores", "totals", "false_positive_rates", "matrix", "per_pair",
            "degenerate_mutants", "provenance"} <= set(doc)
    assert set(doc["scores"]) == {"unconstrained", "constrained"}
    for cell in doc["matrix"]["killed"]:
        assert {"mutant", "mr", "mode"} == set(cell)


def test_run_with_external_manifest(runner, tmp_path):
    import sys
    from pathlib import Path as P

    script = P(__file__).parent / "data" / "external_sum.py"
    manifest = tmp_path / "external.json"
    manifest.write_text(json.dumps([{
        "id": "ext_sum",
        "command": sys.executable,
        "args": [str(script)],
        "input_kind": "list-float",
        "output_kind": "float",
    }]))
    data = tmp_path / "data.jsonl"
    assert _gen(runner, data, n=6).exit_code == 0
    trials = tmp_path / "trials.jsonl"
    result = runner.invoke(main, ["run", "--suts", "ext_sum", "--data", str(data),
                                  "--bindings", "1", "--external-manifest", str(manifest),
                                  "--out", str(trials)])
    assert result.exit_code == 0, result.output
    lines = [json.loads(line) for line in trials.read_text().splitlines()]
    assert len(lines) == 6 * 6
    assert all(line["sut_id"] == "ext_sum" for line in lines)
    permutative = [l for l in lines if l["mr_id"] == "permutative"]
    assert all(l["verdict"] == "HOLDS" for l in permutative)


def test_serve_port_in_use_exits_4(tmp_path):
    import socket
    import subprocess
    import sys

    (tmp_path / "runs").mkdir()
    with socket.socket() as blocker:
        blocker.bind(("127.0.0.1", 0))
        blocker.listen(1)
        port = blocker.getsockname()[1]
        proc = subprocess.run(
            [sys.executable, "-m", "mtpipe.cli", "serve", "--root", str(tmp_path / "runs"),
             "--port", str(port)],
            capture_output=True, text=True, timeout=30)
    assert proc.returncode == 4
