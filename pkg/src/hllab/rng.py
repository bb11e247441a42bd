"""Counter-based Rademacher signs.

Each sign is a function of ``(seed, stream, flat_index)`` only, so a tensor can be
generated in any order or in blocks and still come out bit-identical.  The
counter-based generator is numpy's Philox4x64; its key holds (seed, stream).
"""

from __future__ import annotations

import zlib

import numpy as np

_BLOCK = 4  # Philox4x64 emits 4 words per counter increment
_MASK64 = (1 << 64) - 1


def stream_id(tag: str) -> int:
    """Stable 64-bit stream number for a construction name."""
    return zlib.crc32(tag.encode("utf-8"))


def _raw(seed: int, stream: int, start: int, count: int) -> np.ndarray:
    bitgen = np.random.Philox(key=[seed & _MASK64, stream & _MASK64])
    first_block, offset = divmod(start, _BLOCK)
    if first_block:
        bitgen.advance(first_block)
    return bitgen.random_raw(offset + count)[offset:]


def rademacher_block(seed: int, stream: int, start: int, count: int) -> np.ndarray:
    """Signs for flat indices ``start .. start+count-1`` as float64 +-1."""
    words = _raw(seed, stream, start, count)
    return np.where(words >> np.uint64(63), -1.0, 1.0)


def rademacher(seed: int, shape, stream: int = 0) -> np.ndarray:
    shape = tuple(int(n) for n in shape)
    count = int(np.prod(shape, dtype=np.int64))
    return rademacher_block(seed, stream, 0, count).reshape(shape)


def derive_seed(*parts: int) -> int:
    """Collision-resistant child seed from integer parts (e.g. seed, n, trial)."""
    return int(np.random.SeedSequence([int(p) & _MASK64 for p in parts]).generate_state(1, np.uint64)[0])
