"""Seeding helpers.

All randomness in the package flows through Philox (a counter-based
generator with a published algorithm), so identical seeds reproduce
bit-identical draws across platforms. ``mix_seed`` derives independent
per-cell streams from a base seed and small indices using the splitmix64
finalizer, which is well mixed even for adjacent inputs.
"""

from dataclasses import dataclass

import numpy as np

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class RngSeed:
    """A 64-bit seed value."""

    seed: int

    def __post_init__(self):
        if not 0 <= self.seed <= _MASK64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")


def _splitmix64(x):
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def mix_seed(seed, *indices):
    """Derive a sub-stream seed from a base seed and integer indices."""
    x = int(seed) & _MASK64
    for idx in indices:
        x = _splitmix64(x ^ (int(idx) & _MASK64))
    return x


def make_rng(seed):
    """Philox generator for the given seed (accepts int or RngSeed)."""
    if isinstance(seed, RngSeed):
        seed = seed.seed
    return np.random.Generator(np.random.Philox(key=int(seed) & _MASK64))
