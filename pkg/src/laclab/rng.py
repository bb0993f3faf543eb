"""Counter-based random streams for reproducible, merge-order-free Monte Carlo.

Every replica r of an experiment draws from the Philox stream keyed by
(seed, r); auxiliary draws (i.i.d. comparators, coupling jitter) use the same
key with a disjoint counter block. Results are therefore bit-identical for a
fixed (seed, M) regardless of batching or thread count.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1

# counter blocks, 2**192 states apart: one per purpose
STREAM_POINT = 0
STREAM_AUX = 1
STREAM_IID = 2
STREAM_CONTROL = 3


def replica_generator(seed: int, replica: int, stream: int = STREAM_POINT) -> np.random.Generator:
    """Philox generator for one (seed, replica) pair on the given counter block."""
    if not 0 <= replica < (1 << 64):
        raise ValueError("replica index out of range")
    key = ((replica & _MASK64) << 64) | (seed & _MASK64)
    bg = np.random.Philox(key=key, counter=stream << 192)
    return np.random.Generator(bg)


def random_words(seed: int, replica: int, nwords: int, stream: int = STREAM_POINT) -> np.ndarray:
    """nwords independent uint64 words from the replica stream."""
    gen = replica_generator(seed, replica, stream)
    return gen.integers(0, 1 << 64, size=nwords, dtype=np.uint64)


def words_to_int(words: np.ndarray) -> int:
    """Assemble little-endian uint64 words into a Python big integer."""
    return int.from_bytes(words.tobytes(), "little")


def uniform_open(gen: np.random.Generator, size) -> np.ndarray:
    """Uniforms on the open interval (0, 1): (w + 0.5) * 2**-64.

    Never returns an exact 0 or 1, so inverse-CDF transforms with poles at
    the endpoints are safe.
    """
    w = gen.integers(0, 1 << 64, size=size, dtype=np.uint64)
    return (w.astype(np.float64) + 0.5) * 2.0**-64
