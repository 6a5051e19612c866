#!/usr/bin/env python
# -*- coding: utf-8 -*-

from enum import IntEnum
from pathlib import Path
from typing import NamedTuple, Optional, Tuple, Union

import numpy as np

###############################################################################

# IO Types
PathLike = Union[str, Path]
Seed = Union[int, np.integer]

# A measurement slot is (layer, site), both zero-indexed
Slot = Tuple[int, int]


class Axis(IntEnum):
    """Pauli axis of a purified reference qubit. Values are the dataset codes."""

    X = 0
    Y = 1
    Z = 2

    @classmethod
    def from_bits(cls, x: int, z: int) -> "Axis":
        if x and z:
            return cls.Y
        if x:
            return cls.X
        if z:
            return cls.Z
        raise ValueError("The identity has no Pauli axis.")


class RefStatus(NamedTuple):
    """
    Mixed reference qubit (purified False, axis and sign None) or a purified one
    with its Pauli axis and sign p_R.
    """

    purified: bool
    axis: Optional[Axis] = None
    sign: Optional[int] = None

    @classmethod
    def mixed(cls) -> "RefStatus":
        return cls(False)


class WindowSpec(NamedTuple):
    """
    Spacetime crop of an outcome matrix: layers [0, depth) and `width` sites
    starting `width // 2` sites left of `center`, wrapping periodically.
    """

    center: int
    width: int
    depth: int
