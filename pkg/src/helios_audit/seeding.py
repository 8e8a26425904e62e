"""Deterministic seed derivation for independent RNG substreams.

All randomness in the toolkit flows from a single master seed. Substreams
are derived from (seed, key...) tuples so that independent jobs (bootstrap
replicates, per-cell audits, subset trainings) are reproducible regardless
of execution order or parallelism.
"""

from __future__ import annotations

import hashlib

import numpy as np

_MASK64 = (1 << 64) - 1


def _as_word(part: int | str) -> int:
    if isinstance(part, str):
        digest = hashlib.sha256(part.encode("utf-8")).digest()
        return int.from_bytes(digest[:8], "little")
    return int(part) & _MASK64


def seed_sequence(seed: int, *key: int | str) -> np.random.SeedSequence:
    """SeedSequence for the substream identified by ``(seed, *key)``."""
    entropy = [_as_word(seed)] + [_as_word(part) for part in key]
    return np.random.SeedSequence(entropy)


def substream_seed(seed: int, *key: int | str) -> int:
    """A stable 64-bit child seed for the substream ``(seed, *key)``."""
    return int(seed_sequence(seed, *key).generate_state(1, np.uint64)[0])


def spawn_rng(seed: int, *key: int | str) -> np.random.Generator:
    """A fresh Generator owned by the substream ``(seed, *key)``."""
    return np.random.default_rng(seed_sequence(seed, *key))
