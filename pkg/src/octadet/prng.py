"""SplitMix64, the fixed generator behind every randomized check.

The algorithm is part of the report contract: the same seed yields the same
matrices on every platform and in every implementation that follows it.

* state advances by ``0x9E3779B97F4A7C15`` (mod 2^64) per draw;
* output mixing uses the constants ``0xBF58476D1CE4E5B9`` and
  ``0x94D049BB133111EB`` with shifts 30, 27, 31;
* :meth:`SplitMix64.below` is exact-uniform by rejection;
* :func:`derive` seeds an independent stream from ``(seed, label)`` via the
  first 8 bytes (big-endian) of ``sha256(f"{seed}:{label}")``.
"""

from __future__ import annotations

import hashlib

MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + _GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)``."""
        if n < 1:
            raise ValueError(f"bound must be positive, got {n}")
        limit = ((MASK64 + 1) // n) * n
        while True:
            r = self.next()
            if r < limit:
                return r % n

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in ``[lo, hi]``."""
        return lo + self.below(hi - lo + 1)

    def sample(self, population: list, k: int) -> list:
        """``k`` distinct items, returned in their original order (partial Fisher-Yates)."""
        idx = list(range(len(population)))
        k = min(k, len(idx))
        for i in range(k):
            j = i + self.below(len(idx) - i)
            idx[i], idx[j] = idx[j], idx[i]
        return [population[i] for i in sorted(idx[:k])]

    def split(self) -> "SplitMix64":
        return SplitMix64(self.next())


def derive(seed: int, label: str) -> SplitMix64:
    digest = hashlib.sha256(f"{seed}:{label}".encode()).digest()
    return SplitMix64(int.from_bytes(digest[:8], "big"))
