"""Deterministic random number generation.

Every stochastic routine in this package draws from a PCG64 bit generator
seeded through numpy's SeedSequence, so identical (parameters, seed) pairs
reproduce identical outputs bit-for-bit across runs and platforms.  Routines
that generate several independent parts (one stream per forest component,
for example) split the seed with SeedSequence.spawn instead of sharing one
stream, which keeps per-part output stable when other parts change.
"""

from __future__ import annotations

import numpy as np


def make_rng(seed: int) -> np.random.Generator:
    """Return a PCG64 generator for the given integer seed."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def spawn_rngs(seed: int, n: int) -> list[np.random.Generator]:
    """Return n independent child generators derived from one seed."""
    children = np.random.SeedSequence(seed).spawn(n)
    return [np.random.Generator(np.random.PCG64(c)) for c in children]


def bernoulli_mask(rng: np.random.Generator, p: float, size: int) -> np.ndarray:
    """Draw a boolean mask with P(True) = p using an integer threshold.

    Comparing 53-bit integers against round(p * 2**53) keeps the draw on the
    integer path of the generator; p is quantised to 2**-53, which is far
    below any tolerance used in this package.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability out of range: {p}")
    threshold = round(p * (1 << 53))
    if size == 0:
        return np.zeros(0, dtype=bool)
    return rng.integers(0, 1 << 53, size=size, dtype=np.int64) < threshold
