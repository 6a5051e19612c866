#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Counter-based random streams.

Every random quantity in a circuit or a trajectory is addressed by a tuple of
counters (seed, layer, site, ...) plus a tag, hashed with splitmix64. Nothing
depends on a global generator or on the order in which quantities are requested,
which keeps circuit families reproducible across workers and platforms.
"""

from typing import Dict

import numpy as np

from ..types import Seed

###############################################################################

TAGS: Dict[str, int] = {
    "gate": 1,
    "meas": 2,
    "trajectory": 3,
    "scramble": 4,
    "circuit": 5,
    "label": 6,
    "init": 7,
    "shuffle": 8,
    "dropout": 9,
}

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX_1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX_2 = np.uint64(0x94D049BB133111EB)

###############################################################################


def splitmix64(values: np.ndarray) -> np.ndarray:
    """Finalizer of the splitmix64 generator, applied elementwise."""
    z = np.asarray(values, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = z + _GOLDEN
        z = (z ^ (z >> np.uint64(30))) * _MIX_1
        z = (z ^ (z >> np.uint64(27))) * _MIX_2
    return z ^ (z >> np.uint64(31))


def keyed_hash(*counters: Seed, tag: str) -> np.ndarray:
    """
    Hash a tag and a sequence of counters (scalars or broadcastable arrays) to
    uint64 values.
    """
    h = splitmix64(np.uint64(TAGS[tag]))
    for counter in counters:
        h = splitmix64(h ^ np.asarray(counter, dtype=np.uint64))
    return h


def keyed_uniform(*counters: Seed, tag: str) -> np.ndarray:
    """Uniform doubles in [0, 1) addressed by counters."""
    h = keyed_hash(*counters, tag=tag)
    return (h >> np.uint64(11)).astype(np.float64) * 2.0**-53


def keyed_generator(*counters: Seed, tag: str) -> np.random.Generator:
    """A numpy Generator on a Philox stream whose key is the hashed counters."""
    key = int(keyed_hash(*counters, tag=tag))
    return np.random.Generator(np.random.Philox(key=key))


class RandomBitStream:
    """
    Hands out single random bits from a keyed Philox stream, one 64-bit word at a
    time, so every undetermined measurement consumes exactly one bit.

    Parameters
    ----------
    counters: Seed
        Counters addressing the stream, e.g. (circuit_seed, trajectory_seed).
    tag: str
        Stream tag.
        Default: "trajectory"
    """

    def __init__(self, *counters: Seed, tag: str = "trajectory"):
        key = int(keyed_hash(*counters, tag=tag))
        self._bit_generator = np.random.Philox(key=key)
        self._word = 0
        self._remaining = 0
        self._consumed = 0

    @property
    def bits_consumed(self) -> int:
        return self._consumed

    def next_bit(self) -> int:
        if self._remaining == 0:
            self._word = int(self._bit_generator.random_raw())
            self._remaining = 64

        bit = self._word & 1
        self._word >>= 1
        self._remaining -= 1
        self._consumed += 1
        return bit
