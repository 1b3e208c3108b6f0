import json
import sys
from pathlib import Path

import pytest

from mtpipe.errors import HandshakeError, SutTimeout
from mtpipe.suts import default_registry, invoke, load_external
from mtpipe.suts.external import ExternalRunner

DATA = Path(__file__).parent / "data"


def _manifest(tmp_path, script: str, sut_id: str = "ext_sum") -> Path:
    path = tmp_path / "manifest.json"
    path.write_text(json.dumps([{
        "id": sut_id,
        "command": sys.executable,
        "args": [str(DATA / script)],
        "input_kind": "list-float",
        "output_kind": "float",
    }]))
    return path


def test_load_external_and_invoke(tmp_path):
    descriptors = load_external(_manifest(tmp_path, "external_sum.py"))
    assert len(descriptors) == 1
    sut = descriptors[0]
    assert sut.external
    try:
        assert invoke(sut, [1.0, 2.0, 3.0]).value == 6.0
    finally:
        sut.impl.close()


def test_external_differential_against_builtin(tmp_path, small_dataset):
    """Functionally identical implementations agree within rel 1e-9."""
    registry = default_registry()
    builtin = registry.get("sum")
    (external,) = load_external(_manifest(tmp_path, "external_sum.py"))
    try:
        for datum in small_dataset[:25]:
            a = invoke(builtin, datum.argument)
            b = invoke(external, datum.argument)
            assert b.ok == a.ok
            if a.ok:
                assert b.value == pytest.approx(a.value, rel=1e-9, abs=1e-12)
    finally:
        external.impl.close()


def test_malformed_responder_fails_handshake(tmp_path):
    with pytest.raises(HandshakeError):
        load_external(_manifest(tmp_path, "external_broken.py"))


def test_empty_manifest(tmp_path):
    path = tmp_path / "empty.json"
    path.write_text("[]")
    assert load_external(path) == []


def test_timeout_surfaces_as_sut_timeout(tmp_path):
    (sut,) = load_external(_manifest(tmp_path, "external_slow.py"), timeout=0.3)
    try:
        with pytest.raises(SutTimeout):
            invoke(sut, [1.0])
    finally:
        sut.impl.close()


def test_runner_survives_pickling(tmp_path):
    import pickle

    runner = ExternalRunner(sys.executable, (str(DATA / "external_sum.py"),))
    try:
        assert runner([1.0, 2.0]) == 3.0
        clone = pickle.loads(pickle.dumps(runner))
        try:
            assert clone([4.0, 5.0]) == 9.0
        finally:
            clone.close()
    finally:
        runner.close()
