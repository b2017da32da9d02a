"""Deterministic 64-bit pseudo-random stream (SplitMix64).

The generator is fully specified so that identical seeds give identical
colorings on every platform:

    state <- (state + 0x9E3779B97F4A7C15) mod 2**64
    z <- state
    z <- (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 mod 2**64
    z <- (z ^ (z >> 27)) * 0x94D049BB133111EB mod 2**64
    output z ^ (z >> 31)

Per-instance streams are derived as ``master ^ (index * GOLDEN) mod 2**64``.
"""

from __future__ import annotations

from typing import MutableSequence, TypeVar

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_MUL1 = 0xBF58476D1CE4E5B9
_MUL2 = 0x94D049BB133111EB

T = TypeVar("T")


def mix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * _MUL1) & MASK64
    z = ((z ^ (z >> 27)) * _MUL2) & MASK64
    return z ^ (z >> 31)


def derive_seed(master_seed: int, index: int) -> int:
    """Seed of the ``index``-th instance stream under ``master_seed``."""
    return (master_seed ^ (index * GOLDEN)) & MASK64


class SplitMix64:
    def __init__(self, seed: int) -> None:
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        return mix64(self.state)

    def below(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)`` by rejection sampling."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % bound

    def random(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def shuffle(self, items: MutableSequence[T]) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]

    def permutation(self, count: int) -> np.ndarray:
        """Random permutation of ``range(count)``.

        Sorts indices by a block of ``count`` consecutive outputs (ties broken
        by index), which is vectorized and consumes exactly ``count`` steps.
        """
        keys = self.block(count)
        return np.argsort(keys, kind="stable")

    def block(self, count: int) -> np.ndarray:
        """The next ``count`` outputs as a uint64 array."""
        steps = np.arange(1, count + 1, dtype=np.uint64)
        z = np.uint64(self.state) + steps * np.uint64(GOLDEN)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MUL1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MUL2)
        z = z ^ (z >> np.uint64(31))
        self.state = (self.state + count * GOLDEN) & MASK64
        return z
