"""Seed handling and derived random streams.

Every stochastic routine takes a 64-bit seed and derives independent
sub-streams via a documented split rule: stream(seed, *key) feeds the key
components into the SeedSequence spawn key, so replicate i of a Monte Carlo
batch always sees stream(seed, i) no matter how the batch is scheduled.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError

MAX_SEED = 2**64 - 1


def check_seed(seed) -> int:
    s = int(seed)
    if not 0 <= s <= MAX_SEED:
        raise ValidationError(f"seed {seed!r} is not a 64-bit unsigned integer")
    return s


def stream(seed: int, *key: int) -> np.random.Generator:
    """Independent generator for the given seed and split key."""
    ss = np.random.SeedSequence(entropy=check_seed(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(ss))


def open_uniform(gen: np.random.Generator) -> float:
    """Uniform draw in the open interval (0, 1); redraws the measure-zero 0."""
    u = gen.random()
    while u == 0.0:
        u = gen.random()
    return u
