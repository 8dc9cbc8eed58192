"""Seed plumbing.

Every random stream is addressed by ``(seed, purpose, *index)`` through
:class:`numpy.random.SeedSequence` spawn keys, so a given block of draws is the
same no matter how work is chunked or how many threads run it.
"""
import numpy as np

# stream purposes
OPERATOR = 1
SAMPLE = 2
PAIRS = 3
CLOUD = 4
SWEEP = 5
DIAMETER = 6

_MASK = (1 << 64) - 1


def stream(seed: int, *key: int) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed) & _MASK, spawn_key=tuple(int(k) for k in key))
    return np.random.default_rng(ss)


def derive_seed(seed: int, *key: int) -> int:
    """A 63-bit child seed, stable across platforms."""
    ss = np.random.SeedSequence(int(seed) & _MASK, spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))
