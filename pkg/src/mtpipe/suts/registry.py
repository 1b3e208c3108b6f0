"""Subject-function registry: descriptors, mutants, and invocation.

Built-in subjects are plain callables over the decoded argument; domain
errors (empty list to ``min`` and friends) raise SutDomainError inside the
callable and surface as a failure outcome, never as a crash. External
subjects plug in through the subprocess adapter, which follows the same
callable protocol.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from ..errors import KindMismatch


class SutDomainError(Exception):
    """Input outside the subject's domain; carries a short reason tag."""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(reason)


@dataclass(frozen=True)
class SutOutcome:
    value: float | None = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass(frozen=True)
class MutantDescriptor:
    id: str
    parent_sut: str
    description: str  # operator-level change, e.g. "+ replaced by -"
    impl: Callable = field(compare=False)


@dataclass(frozen=True)
class SutDescriptor:
    id: str
    input_kind: str
    output_kind: str
    impl: Callable = field(compare=False)
    oracle_flags: frozenset[str] = frozenset()
    mutants: tuple[MutantDescriptor, ...] = ()
    external: bool = False

    def mutant(self, mutant_id: str) -> MutantDescriptor | None:
        for m in self.mutants:
            if m.id == mutant_id:
                return m
        return None


@dataclass
class Registry:
    suts: tuple[SutDescriptor, ...]

    def __post_init__(self):
        self._by_id = {s.id: s for s in self.suts}
        if len(self._by_id) != len(self.suts):
            raise ValueError("duplicate SUT ids in registry")

    def get(self, sut_id: str) -> SutDescriptor | None:
        return self._by_id.get(sut_id)

    def extend(self, extra: list[SutDescriptor]) -> "Registry":
        return Registry(suts=self.suts + tuple(extra))


def list_suts(registry: Registry) -> list[SutDescriptor]:
    return list(registry.suts)


def _check_kind(input_kind: str, value) -> None:
    if input_kind.startswith("list"):
        if not isinstance(value, (list, tuple)):
            raise KindMismatch(f"expected a list for {input_kind}, got {type(value).__name__}")
        if any(not isinstance(v, (int, float)) or isinstance(v, bool) for v in value):
            raise KindMismatch("list elements must be numbers")
    else:
        if isinstance(value, (list, tuple)) or isinstance(value, bool):
            raise KindMismatch(f"expected a scalar for {input_kind}, got {type(value).__name__}")
        if not isinstance(value, (int, float)):
            raise KindMismatch("scalar input must be a number")


def invoke(target: SutDescriptor | MutantDescriptor, value, *, input_kind: str | None = None) -> SutOutcome:
    """Run a subject or mutant on one argument.

    Deterministic for builtins. Domain errors come back as a failure
    outcome; KindMismatch (a caller bug) and external-protocol errors
    propagate as exceptions.
    """
    if input_kind is None:
        if isinstance(target, SutDescriptor):
            input_kind = target.input_kind
        else:
            raise KindMismatch("invoking a mutant requires the parent input kind")
    _check_kind(input_kind, value)
    if input_kind.startswith("list"):
        value = [float(v) for v in value]
    else:
        value = float(value)
    try:
        result = target.impl(value)
    except SutDomainError as exc:
        return SutOutcome(error=exc.reason)
    result = float(result)
    if not math.isfinite(result):
        return SutOutcome(error="non-finite-output")
    return SutOutcome(value=result)
