"""Keyed random-number streams.

All randomness in the package is drawn from generators keyed by a master
seed plus a path of integers or names, e.g. ``stream(seed, b1, b2)``.  The
stream consumed by one task is therefore independent of the order in which
tasks run, which keeps ensembles reproducible under parallel execution.
"""

from __future__ import annotations

import zlib

import numpy as np


def _key_part(part) -> int:
    if isinstance(part, str):
        return zlib.crc32(part.encode("utf-8"))
    part = int(part)
    if part < 0:
        raise ValueError("stream path components must be non-negative integers")
    return part


def stream(seed: int, *path) -> np.random.Generator:
    """Return the generator for the stream keyed by ``(seed, *path)``."""
    key = tuple(_key_part(part) for part in path)
    return np.random.default_rng(np.random.SeedSequence(entropy=int(seed), spawn_key=key))


def derive_seed(seed: int, *path) -> int:
    """Return a 64-bit seed deterministically derived from ``(seed, *path)``.

    Used to hand a child component its own master seed (for example one
    benchmark repetition) without coupling it to sibling components.
    """
    key = tuple(_key_part(part) for part in path)
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=key)
    return int(ss.generate_state(1, np.uint64)[0])
