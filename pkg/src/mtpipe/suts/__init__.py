"""Subject-function corpus: built-in registry, mutants, external adapter."""

from .builtins import default_registry
from .external import DEFAULT_TIMEOUT, ExternalRunner, load_external
from .registry import (
    MutantDescriptor,
    Registry,
    SutDescriptor,
    SutDomainError,
    SutOutcome,
    invoke,
    list_suts,
)

__all__ = [
    "DEFAULT_TIMEOUT",
    "ExternalRunner",
    "MutantDescriptor",
    "Registry",
    "SutDescriptor",
    "SutDomainError",
    "SutOutcome",
    "default_registry",
    "invoke",
    "list_suts",
    "load_external",
]
