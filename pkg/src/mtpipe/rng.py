"""Deterministic 64-bit RNG used everywhere randomness is needed.

All sampling in the pipeline flows through SplitMix64 so that datasets,
parameter bindings and permutations are reproducible bit-for-bit across
platforms and Python versions. Child streams are derived with ``mix64``,
which scrambles (seed, index) pairs through the SplitMix64 finalizer; the
constants are the standard ones from the SplitMix64 reference.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def _finalize(z: int) -> int:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK
    return z ^ (z >> 31)


def mix64(seed: int, *indices: int) -> int:
    """Derive an independent child seed from ``seed`` and stream indices."""
    z = seed & _MASK
    for ix in indices:
        z = _finalize((z + _GAMMA * ((ix & _MASK) + 1)) & _MASK)
    return z


def fnv64(text: str) -> int:
    """FNV-1a of a string, used to fold ids into seed derivations."""
    h = 0xCBF29CE484222325
    for b in text.encode("utf-8"):
        h = ((h ^ b) * 0x100000001B3) & _MASK
    return h


class SplitMix64:
    """Sequential SplitMix64 stream."""

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        return _finalize(self._state)

    def next_float(self) -> float:
        """Uniform in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * 2.0**-53

    def next_int(self, lo: int, hi: int) -> int:
        """Uniform integer in the inclusive range [lo, hi].

        Uses rejection to avoid modulo bias; the range must be non-empty.
        """
        if hi < lo:
            raise ValueError(f"empty integer range [{lo}, {hi}]")
        span = hi - lo + 1
        limit = (_MASK + 1) - ((_MASK + 1) % span)
        while True:
            u = self.next_u64()
            if u < limit:
                return lo + u % span

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.next_int(0, i)
            items[i], items[j] = items[j], items[i]
