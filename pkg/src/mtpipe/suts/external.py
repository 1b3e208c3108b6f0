"""External subject adapter: line-delimited JSON over stdin/stdout.

Protocol:
    request  {"id": "<trial>", "input": [<argument>]}
    response {"id": "<trial>", "output": 6.0}
          or {"id": "<trial>", "error": "empty-input"}
    handshake request {"hello": true}
          -> {"hello": true, "input_kind": "list-float", "output_kind": "float"}

One process serves one request at a time; parallel campaigns spawn one
process per worker (the runner restarts lazily after pickling). A request
that exceeds the timeout kills the process and raises SutTimeout, which
the executor records as an ERROR trial.
"""

from __future__ import annotations

import json
import subprocess
import threading
from dataclasses import dataclass
from pathlib import Path

from ..errors import (
    FormatError,
    HandshakeError,
    IoError,
    ProtocolError,
    SignatureError,
    SutTimeout,
)
from ..mrlang.ast import INPUT_KINDS
from .registry import SutDescriptor, SutDomainError

DEFAULT_TIMEOUT = 2.0


class ExternalRunner:
    """Callable wrapper around one external SUT process."""

    def __init__(self, command: str, args: tuple[str, ...] = (), timeout: float = DEFAULT_TIMEOUT):
        self.command = command
        self.args = tuple(args)
        self.timeout = timeout
        self._proc: subprocess.Popen | None = None
        self._lock = threading.Lock()
        self._counter = 0

    # Pickling drops the live process; each worker restarts its own.
    def __getstate__(self):
        return {"command": self.command, "args": self.args, "timeout": self.timeout}

    def __setstate__(self, state):
        self.__init__(state["command"], state["args"], state["timeout"])

    def _ensure_proc(self) -> subprocess.Popen:
        if self._proc is None or self._proc.poll() is not None:
            try:
                self._proc = subprocess.Popen(
                    [self.command, *self.args],
                    stdin=subprocess.PIPE,
                    stdout=subprocess.PIPE,
                    stderr=subprocess.DEVNULL,
                    text=True,
                )
            except OSError as exc:
                raise IoError(f"cannot start external SUT {self.command!r}: {exc}") from exc
        return self._proc

    def close(self) -> None:
        if self._proc is not None and self._proc.poll() is None:
            self._proc.kill()
            self._proc.wait()
        self._proc = None

    def _roundtrip(self, request: dict) -> dict:
        proc = self._ensure_proc()
        line = json.dumps(request)
        reply: list[str] = []

        def pump():
            try:
                proc.stdin.write(line + "\n")
                proc.stdin.flush()
                reply.append(proc.stdout.readline())
            except (OSError, ValueError):
                pass

        t = threading.Thread(target=pump, daemon=True)
        t.start()
        t.join(self.timeout)
        if t.is_alive():
            self.close()
            raise SutTimeout(f"external SUT {self.command!r} exceeded {self.timeout}s")
        if not reply or not reply[0]:
            self.close()
            raise ProtocolError(f"external SUT {self.command!r} closed the stream")
        try:
            return json.loads(reply[0])
        except json.JSONDecodeError as exc:
            self.close()
            raise ProtocolError(f"external SUT {self.command!r} sent malformed JSON: {exc}") from exc

    def handshake(self) -> dict:
        response = self._roundtrip({"hello": True})
        if response.get("hello") is not True:
            raise HandshakeError(f"external SUT {self.command!r}: bad handshake {response!r}")
        return response

    def __call__(self, value):
        with self._lock:
            self._counter += 1
            response = self._roundtrip({"id": f"x{self._counter}", "input": [value]})
        if "error" in response:
            raise SutDomainError(str(response["error"]))
        if "output" not in response:
            raise ProtocolError(f"external SUT {self.command!r}: response missing output")
        out = response["output"]
        if not isinstance(out, (int, float)) or isinstance(out, bool):
            raise ProtocolError(f"external SUT {self.command!r}: output is not a number")
        return float(out)


@dataclass(frozen=True)
class ExternalEntry:
    id: str
    command: str
    args: tuple[str, ...]
    input_kind: str
    output_kind: str


def load_external(manifest_path: str | Path, timeout: float = DEFAULT_TIMEOUT) -> list[SutDescriptor]:
    """Read an external-SUT manifest and return handshake-validated descriptors.

    Manifest format: JSON list of {id, command, args, input_kind, output_kind}.
    """
    path = Path(manifest_path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise IoError(f"cannot read manifest {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(doc, list):
        raise FormatError(f"{path}: manifest must be a JSON list")

    descriptors: list[SutDescriptor] = []
    for i, raw in enumerate(doc):
        if not isinstance(raw, dict):
            raise FormatError(f"{path}: entry {i} must be an object")
        try:
            entry = ExternalEntry(
                id=str(raw["id"]),
                command=str(raw["command"]),
                args=tuple(str(a) for a in raw.get("args", [])),
                input_kind=str(raw["input_kind"]),
                output_kind=str(raw["output_kind"]),
            )
        except KeyError as exc:
            raise FormatError(f"{path}: entry {i} missing field {exc}") from exc
        if entry.input_kind not in INPUT_KINDS:
            raise SignatureError(f"{path}: entry {entry.id!r} has unknown input kind "
                                 f"{entry.input_kind!r}")
        if entry.output_kind not in ("int", "float"):
            raise SignatureError(f"{path}: entry {entry.id!r} has unknown output kind "
                                 f"{entry.output_kind!r}")
        runner = ExternalRunner(entry.command, entry.args, timeout)
        try:
            hello = runner.handshake()
        except (ProtocolError, SutTimeout) as exc:
            runner.close()
            raise HandshakeError(f"{path}: entry {entry.id!r}: {exc}") from exc
        if (hello.get("input_kind") != entry.input_kind
                or hello.get("output_kind") != entry.output_kind):
            runner.close()
            raise HandshakeError(
                f"{path}: entry {entry.id!r} declares {entry.input_kind}->{entry.output_kind} "
                f"but process reports {hello.get('input_kind')}->{hello.get('output_kind')}")
        descriptors.append(SutDescriptor(
            id=entry.id,
            input_kind=entry.input_kind,
            output_kind=entry.output_kind,
            impl=runner,
            external=True,
        ))
    return descriptors
