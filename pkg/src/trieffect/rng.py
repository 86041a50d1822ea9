"""Reproducible random number generation.

All sampling uses the counter-based Philox generator, and normal draws use
the inverse-CDF method, so identical seeds give identical streams across
machines and independently of parallel scheduling. Per-task seeds are
derived with a 64-bit avalanche mix (splitmix64), never by sharing streams.
"""
from __future__ import annotations

import numpy as np
from scipy.special import ndtri

_MASK64 = (1 << 64) - 1


def mix_seed(base: int, index: int) -> int:
    """splitmix64 avalanche of (base, index) into a 64-bit seed."""
    z = (base + 0x9E3779B97F4A7C15 * (index + 1)) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def make_generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def uniform(gen: np.random.Generator, size: int) -> np.ndarray:
    return gen.random(size)


def normal(gen: np.random.Generator, size: int) -> np.ndarray:
    """Standard normals via the inverse CDF, for cross-platform determinism."""
    u = gen.random(size)
    # guard the (2^-53-probability) exact zero, which would map to -inf
    return ndtri(np.maximum(u, 2.0**-53))
