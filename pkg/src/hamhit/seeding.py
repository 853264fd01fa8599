"""Deterministic seed derivation for reproducible parallel streams."""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def mix(seed: int, stream: int) -> int:
    """64-bit seed for sub-stream ``stream`` of ``seed``."""
    return splitmix64(splitmix64(seed & _MASK) ^ (stream & _MASK))


def rng(seed: int, stream: int | None = None) -> np.random.Generator:
    s = seed & _MASK if stream is None else mix(seed, stream)
    return np.random.default_rng(s)
