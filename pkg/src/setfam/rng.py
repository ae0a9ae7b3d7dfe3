"""Deterministic random-stream derivation.

Every randomized operation in this package draws from a numpy ``Philox``
(counter-based) bit generator keyed through ``SeedSequence``.  A stream is
addressed by an integer master seed plus an optional path of integers, e.g.
``stream(seed, row_index)`` for the row of a sweep or ``stream(seed)`` for a
single tester run.  Identical (seed, path) always yields an identical stream
on every platform, and distinct paths yield independent streams, so parallel
and serial execution of row-structured work produce the same bytes.

Consumers must document the order in which they consume the stream; that
order is part of each operation's reproducibility contract.
"""

from __future__ import annotations

import numpy as np

__all__ = ["stream", "MAX_SEED"]

#: Seeds are accepted as unsigned 64-bit values.
MAX_SEED = 2**64 - 1


def stream(seed: int, *path: int) -> np.random.Generator:
    """Return the Philox generator addressed by ``(seed, *path)``."""
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"seed must be a u64, got {seed}")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence((seed, *path))))
