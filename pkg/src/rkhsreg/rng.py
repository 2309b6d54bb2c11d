"""Seed splitting.

Every random draw is taken from a substream keyed by ``(seed, tag, block)``:
``SeedSequence([seed, crc32(tag), block])``.  Trials are grouped into blocks
of ``BLOCK`` consecutive indices, so a run split over workers by block gives
the same numbers as a serial run.
"""
from __future__ import annotations

import zlib

import numpy as np

BLOCK = 1024


def substream(seed: int, tag: str, block: int = 0) -> np.random.Generator:
    key = [int(seed) & 0xFFFFFFFFFFFFFFFF, zlib.crc32(tag.encode()), int(block)]
    return np.random.default_rng(np.random.SeedSequence(key))


def blocks(trials: int):
    """Yield ``(block_index, size)`` covering ``trials`` trials."""
    for b, start in enumerate(range(0, trials, BLOCK)):
        yield b, min(BLOCK, trials - start)
