"""Reproducible random streams.

Sampling is split into fixed-size blocks.  Block ``k`` draws from a Philox
generator keyed by ``SeedSequence(seed, spawn_key=(k,))``, so any block can be
regenerated on its own and a parallel evaluation sees the same numbers as a
serial one.
"""
from __future__ import annotations

import numpy as np

BLOCK = 1 << 16


def block_generator(seed: int, block: int, stream: int = 0) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(stream), int(block)))
    return np.random.Generator(np.random.Philox(ss))


def uniform_blocks(seed: int, n: int, width: int, lo: float = 0.0, hi: float = 1.0,
                   stream: int = 0, block: int = BLOCK):
    """Yield arrays of shape ``(m, width)`` with ``sum(m) == n`` of uniform draws on ``[lo, hi)``."""
    k = 0
    done = 0
    while done < n:
        m = min(block, n - done)
        yield block_generator(seed, k, stream).uniform(lo, hi, size=(m, width))
        done += m
        k += 1
