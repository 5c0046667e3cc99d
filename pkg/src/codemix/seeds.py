"""Deterministic seed derivation.

Python's builtin hash() is salted per process, so derived seeds go through
a splitmix64-style mixer instead. Same inputs give the same stream on any
platform or run.
"""
from __future__ import annotations

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def mix64(*parts: int) -> int:
    """Fold integer parts into one 64-bit seed."""
    acc = 0
    for part in parts:
        acc = (acc + (part & _MASK) + _GOLDEN) & _MASK
        z = acc
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        acc = z ^ (z >> 31)
    return acc
