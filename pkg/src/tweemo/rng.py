"""Seeded, platform-independent pseudo-randomness for splits and folds.

All shuffling in the pipeline goes through splitmix64 so that a (input, seed)
pair reproduces the same ordering on any OS, architecture, or Python build.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1


class SplitMix64:
    """splitmix64 generator (Steele, Lea & Flood 2014). 64-bit state, 64-bit output."""

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return (z ^ (z >> 31)) & _MASK

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound) via rejection sampling (no modulo bias)."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (((1 << 64) // bound) * bound) - 1
        while True:
            u = self.next_u64()
            if u <= limit:
                return u % bound


def seeded_shuffle(items: list, seed: int) -> list:
    """Return a new list with Fisher-Yates order driven by SplitMix64(seed)."""
    rng = SplitMix64(seed)
    out = list(items)
    for i in range(len(out) - 1, 0, -1):
        j = rng.below(i + 1)
        out[i], out[j] = out[j], out[i]
    return out
