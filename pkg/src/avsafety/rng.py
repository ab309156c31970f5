"""Deterministic, documented pseudo-random generator.

Every random decision in this package (splits, SMOTE, bootstraps, epoch
shuffles, synthetic data) flows through the splitmix64 generator below so
that identical seeds reproduce identical results, independent of platform
or library versions. The exact rules, which a re-implementation must follow
bit for bit:

* state update:  ``state = (state + 0x9E3779B97F4A7C15) mod 2**64``
* output mix:    ``z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27;
  z *= 0x94D049BB133111EB; z ^= z >> 31`` (all mod 2**64)
* float in [0,1): top 53 bits, ``(u >> 11) * 2**-53``
* integer in [0,n): multiply-shift, ``(u * n) >> 64``
* shuffle: Fisher-Yates from the last element down,
  ``for i = len-1 .. 1: j = next_below(i+1); swap(a[i], a[j])``
"""

from __future__ import annotations

from typing import MutableSequence

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    """splitmix64 output mix of a 64-bit value."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, *parts: int) -> int:
    """Fold integer components into a new 64-bit seed.

    Used to give every stage of a pipeline (split, SMOTE, tuning, fitting)
    its own independent stream while staying reproducible from one base
    seed. Order of parts matters.
    """
    state = seed & _MASK64
    for part in parts:
        state = mix64((state + _GOLDEN) & _MASK64) ^ (part & _MASK64)
    return mix64((state + _GOLDEN) & _MASK64)


class SplitMix64:
    """splitmix64 stream with the helpers described in the module docstring."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        return mix64(self._state)

    def next_float(self) -> float:
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def next_below(self, n: int) -> int:
        """Uniform integer in [0, n) via multiply-shift."""
        if n <= 0:
            raise ValueError(f"next_below requires n >= 1, got {n}")
        return (self.next_u64() * n) >> 64

    def shuffle(self, seq: MutableSequence) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(seq) - 1, 0, -1):
            j = self.next_below(i + 1)
            seq[i], seq[j] = seq[j], seq[i]

    def fork(self) -> "SplitMix64":
        """Child generator seeded from this stream."""
        return SplitMix64(self.next_u64())
