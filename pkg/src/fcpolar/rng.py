"""Counter-based random streams shared by the scalar and batch engines.

Every random decision in a simulation run is a pure function of
(seed, stream, keys...), so the scalar reference decoders and the
vectorized batch engine reproduce each other bit for bit regardless of
evaluation order or chunking. The mixer is the standard splitmix64 finalizer.
"""

from __future__ import annotations

import numpy as np

MASK = 0xFFFFFFFFFFFFFFFF

STREAM_CHANNEL = 1
STREAM_MESSAGE = 2
STREAM_COIN = 3
STREAM_PRUNE = 4


def _mix64(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


def keyed(seed: int, *keys: int) -> int:
    """64-bit hash of the seed and integer keys."""
    h = _mix64(seed & MASK)
    for k in keys:
        h = _mix64(h ^ (k & MASK))
    return h


def keyed_bit(seed: int, *keys: int) -> int:
    return keyed(seed, *keys) & 1


def keyed_uniform(seed: int, *keys: int) -> float:
    return keyed(seed, *keys) / 2.0**64


def _mix64_array(z: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        z = z + np.uint64(0x9E3779B97F4A7C15)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def keyed_array(seed: int, *keys) -> np.ndarray:
    """Vectorized keyed(): broadcasts integer-array keys elementwise."""
    arrays = [np.asarray(k, dtype=np.uint64) for k in keys]
    shape = np.broadcast_shapes(*(a.shape for a in arrays))
    h = np.full(shape, _mix64(seed & MASK), dtype=np.uint64)
    for a in arrays:
        h = _mix64_array(h ^ np.broadcast_to(a, shape))
    return h


def keyed_bit_array(seed: int, *keys) -> np.ndarray:
    return (keyed_array(seed, *keys) & np.uint64(1)).astype(np.uint8)


def keyed_uniform_array(seed: int, *keys) -> np.ndarray:
    return keyed_array(seed, *keys) / 2.0**64
