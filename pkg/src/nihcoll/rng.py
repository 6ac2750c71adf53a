"""Seed handling.

Every random draw goes through ``numpy.random.Generator`` backed by PCG64.
Per-trial seeds are split off a 64-bit master seed by hashing, so trial ``i``
sees the same stream no matter how trials are scheduled.
"""

from __future__ import annotations

import hashlib

import numpy as np

MASK64 = (1 << 64) - 1


def derive_seed(master_seed: int, *path: int) -> int:
    """64-bit child seed: BLAKE2b over the little-endian words of (master, *path)."""
    h = hashlib.blake2b(digest_size=8)
    for word in (master_seed, *path):
        h.update((int(word) & MASK64).to_bytes(8, "little"))
    return int.from_bytes(h.digest(), "little")


def make_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def trial_rng(master_seed: int, trial: int) -> np.random.Generator:
    return make_rng(derive_seed(master_seed, trial))
