#!/usr/bin/env python
# -*- coding: utf-8 -*-

from typing import Any, Tuple

import numpy as np

from ..types import Axis

###############################################################################

_LETTERS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_SYMBOLS = {bits: letter for letter, bits in _LETTERS.items()}

###############################################################################


def product_phase(
    x1: np.ndarray, z1: np.ndarray, x2: np.ndarray, z2: np.ndarray
) -> int:
    """
    Power of i picked up when multiplying the Hermitian Paulis (x1, z1) and
    (x2, z2) with +1 signs: P1 P2 = i^k P(x1 ^ x2, z1 ^ z2), k in {0, 1, 2, 3}.

    Writing each Hermitian Pauli as i^(x.z) X^x Z^z, the reordering
    Z^z1 X^x2 = (-1)^(z1.x2) X^x2 Z^z1 gives the phase directly.
    """
    x = x1 ^ x2
    z = z1 ^ z2
    k = (
        int(np.count_nonzero(x1 & z1))
        + int(np.count_nonzero(x2 & z2))
        + 2 * int(np.count_nonzero(z1 & x2))
        - int(np.count_nonzero(x & z))
    )
    return k % 4


class PauliString:
    """
    A Hermitian Pauli operator on n qubits with a sign of +1 or -1.

    Parameters
    ----------
    x: np.ndarray
        Boolean X-component of length n.
    z: np.ndarray
        Boolean Z-component of length n.
    sign: int
        +1 or -1.
        Default: 1

    Examples
    --------
    >>> p = PauliString.from_label("-XZI")
    ... q = PauliString.from_label("+ZXI")
    ... p.commutes_with(q)
    True
    """

    def __init__(self, x: np.ndarray, z: np.ndarray, sign: int = 1):
        x = np.asarray(x, dtype=bool)
        z = np.asarray(z, dtype=bool)
        if x.shape != z.shape or x.ndim != 1:
            raise ValueError(
                f"X and Z components must be 1D and of equal length "
                f"(received shapes {x.shape} and {z.shape})."
            )
        if sign not in (1, -1):
            raise ValueError(f"Sign must be +1 or -1 (received {sign}).")

        self.x = x
        self.z = z
        self.sign = int(sign)

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        sign = 1
        if label[0] in "+-":
            sign = -1 if label[0] == "-" else 1
            label = label[1:]

        try:
            bits = [_LETTERS[letter] for letter in label.upper()]
        except KeyError:
            raise ValueError(f"Invalid Pauli label '{label}'.")

        x, z = zip(*bits)
        return cls(np.array(x, dtype=bool), np.array(z, dtype=bool), sign)

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(np.zeros(n, dtype=bool), np.zeros(n, dtype=bool))

    @classmethod
    def single(cls, n: int, site: int, axis: Axis, sign: int = 1) -> "PauliString":
        pauli = cls.identity(n)
        pauli.x[site] = axis in (Axis.X, Axis.Y)
        pauli.z[site] = axis in (Axis.Y, Axis.Z)
        pauli.sign = sign
        return pauli

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def weight(self) -> int:
        return int(np.count_nonzero(self.x | self.z))

    def commutes_with(self, other: "PauliString") -> bool:
        form = np.count_nonzero(self.x & other.z) + np.count_nonzero(self.z & other.x)
        return bool(form % 2 == 0)

    def restricted(self, sites: Tuple[int, ...]) -> "PauliString":
        index = list(sites)
        return PauliString(self.x[index], self.z[index], self.sign)

    def copy(self) -> "PauliString":
        return PauliString(self.x.copy(), self.z.copy(), self.sign)

    def __mul__(self, other: "PauliString") -> "PauliString":
        if self.n != other.n:
            raise ValueError(
                f"Cannot multiply Pauli strings of different lengths "
                f"({self.n} and {other.n})."
            )
        if not self.commutes_with(other):
            raise ValueError(
                "Product of anticommuting Pauli strings is not Hermitian."
            )

        k = product_phase(self.x, self.z, other.x, other.z)
        sign = self.sign * other.sign * (-1 if k == 2 else 1)
        return PauliString(self.x ^ other.x, self.z ^ other.z, sign)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, PauliString):
            return NotImplemented

        return (
            self.sign == other.sign
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.z, other.z)
        )

    def __str__(self) -> str:
        body = "".join(
            _SYMBOLS[(int(x), int(z))] for x, z in zip(self.x, self.z)
        )
        return f"{'+' if self.sign == 1 else '-'}{body}"

    def __repr__(self) -> str:
        return f"<PauliString {self}>"
