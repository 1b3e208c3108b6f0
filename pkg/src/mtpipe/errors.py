"""Exception hierarchy shared across the pipeline.

Every error that maps to a CLI exit code derives from MtError; the CLI
translates subclasses to exit codes (invalid input 2, provenance 3,
environment 4, anything else 1).
"""

from __future__ import annotations


class MtError(Exception):
    """Base class for all pipeline errors."""


class MrSyntaxError(MtError):
    """Raised when MR-DSL text does not match the grammar.

    Carries the 1-based source position and the token classes that would
    have been accepted at that point.
    """

    def __init__(self, message: str, line: int, col: int, expected: tuple[str, ...] = ()):
        self.line = line
        self.col = col
        self.expected = expected
        suffix = f" (expected {', '.join(expected)})" if expected else ""
        super().__init__(f"{line}:{col}: {message}{suffix}")


class MrValidationError(MtError):
    """Raised when a parsed MR violates a semantic invariant.

    ``diagnostics`` holds the full list produced by the validator.
    """

    def __init__(self, diagnostics):
        self.diagnostics = tuple(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))


class OutOfDomain(MtError):
    def __init__(self, name: str, value, interval):
        self.name = name
        self.value = value
        self.interval = interval
        super().__init__(f"value {value!r} for parameter {name!r} outside domain {interval}")


class MissingParam(MtError):
    def __init__(self, names):
        self.names = tuple(names)
        super().__init__(f"binding is missing parameters: {', '.join(self.names)}")


class UnknownParam(MtError):
    def __init__(self, names):
        self.names = tuple(names)
        super().__init__(f"binding has undeclared parameters: {', '.join(self.names)}")


class IoError(MtError):
    """File-level failure while reading or writing an artifact."""


class FormatError(MtError):
    """Artifact file exists but does not match its schema."""


class KindMismatch(MtError):
    """Caller passed input of the wrong kind to a SUT or transform."""


class InvalidProfile(MtError):
    """Generation profile violates its invariants."""


class ConfigError(MtError):
    """Campaign configuration references unknown ids or is inconsistent."""


class InsufficientData(MtError):
    """Too few non-ERROR trials to mine under the given support threshold."""


class EmptyListTransform(MtError):
    """List transform applied to an empty list (surfaces as trial ERROR)."""


class NonFiniteOutput(MtError):
    """Relation operand is NaN or infinite (surfaces as trial ERROR)."""


class ProtocolError(MtError):
    """External SUT process sent a malformed response."""


class HandshakeError(MtError):
    """External SUT process failed the load-time handshake."""


class SignatureError(MtError):
    """External SUT manifest declares an unsupported signature."""


class StaleConstraints(MtError):
    """Constraint report provenance hashes do not match current inputs."""


class EnvironmentError_(MtError):
    """Environment problem (port in use, unwritable directory)."""

class SutTimeout(MtError):
    """External SUT exceeded its per-invocation timeout."""
