"""SplitMix64 pseudo-random generator.

SplitMix64 (Steele, Lea & Flood 2014) is used everywhere anonkit needs
randomness. It is tiny, has a 64-bit state, and is trivially portable, so a
seed fully determines every generated dataset and every perturbation.

Gaussian deviates use the basic Box-Muller transform (cosine branch only, one
normal per two uniforms) so each draw consumes a fixed number of words.
"""

from __future__ import annotations

import math
from typing import MutableSequence, Sequence, TypeVar

T = TypeVar("T")

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & MASK64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & MASK64
    return z ^ (z >> 31)


def derive_seed(*parts: int) -> int:
    """Fold several integers into one 64-bit seed."""
    state = 0
    for p in parts:
        state = mix64((state + GOLDEN_GAMMA + (p & MASK64)) & MASK64)
    return state


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        return mix64(self.state)

    def random(self) -> float:
        """Uniform double in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection (no modulo bias)."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], both inclusive."""
        return lo + self.randbelow(hi - lo + 1)

    def choice(self, items: Sequence[T]) -> T:
        return items[self.randbelow(len(items))]

    def shuffle(self, items: MutableSequence) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]

    def gauss(self) -> float:
        # u1 in (0, 1] keeps log() finite
        u1 = ((self.next_u64() >> 11) + 1) * (1.0 / (1 << 53))
        u2 = self.random()
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)
