#!/usr/bin/env python
# -*- coding: utf-8 -*-

from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from ..exceptions import TableauInvariantError
from .pauli import PauliString

###############################################################################

# (x bits, z bits, sign bit) of a Hermitian Pauli on the gate support; bit i of
# x / z refers to support qubit i and the sign bit is 1 for a -1 sign.
PauliImage = Tuple[int, int, int]

TWO_QUBIT_GROUP_ORDER = 11520

###############################################################################


def _popcount(value: int) -> int:
    return bin(value).count("1")


def _symplectic_form(x1: int, z1: int, x2: int, z2: int) -> int:
    return (_popcount(x1 & z2) + _popcount(z1 & x2)) % 2


def _generator_codes(arity: int) -> List[Tuple[int, int]]:
    # Generators ordered X_0, Z_0, X_1, Z_1
    codes = []
    for qubit in range(arity):
        codes.append((1 << qubit, 0))
        codes.append((0, 1 << qubit))
    return codes


@dataclass(frozen=True)
class CliffordGate:
    """
    A Clifford unitary on one or two qubits, stored as the images of the
    single-qubit generators X_0, Z_0 (, X_1, Z_1) under conjugation.

    Parameters
    ----------
    arity: int
        1 or 2.
    images: Tuple[PauliImage, ...]
        Images of the 2 * arity generators in the order X_0, Z_0, X_1, Z_1.

    Notes
    -----
    A conjugation lookup over all 4^arity local Paulis is built on construction:
    local code q = x | (z << arity) maps to `lookup_out[q]` with a sign flip of
    `lookup_flip[q]`.
    """

    arity: int
    images: Tuple[PauliImage, ...]
    lookup_out: np.ndarray = field(init=False, repr=False, compare=False)
    lookup_flip: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.arity not in (1, 2):
            raise ValueError(f"Clifford gates act on 1 or 2 qubits, not {self.arity}.")
        if len(self.images) != 2 * self.arity:
            raise ValueError(
                f"A gate of arity {self.arity} needs {2 * self.arity} generator "
                f"images (received {len(self.images)})."
            )
        if not self.is_symplectic():
            raise ValueError(f"Generator images {self.images} are not symplectic.")

        out, flip = self._build_lookup()
        object.__setattr__(self, "lookup_out", out)
        object.__setattr__(self, "lookup_flip", flip)

    def _build_lookup(self) -> Tuple[np.ndarray, np.ndarray]:
        arity = self.arity
        mask = (1 << arity) - 1
        size = 4**arity
        out = np.zeros(size, dtype=np.uint8)
        flip = np.zeros(size, dtype=np.uint8)

        for code in range(size):
            x, z = code & mask, code >> arity
            # Accumulate i^k X^ax Z^az, starting from the i^(x.z) of sigma(x, z)
            ax, az, k = 0, 0, _popcount(x & z)
            for qubit in range(arity):
                for use, image in (
                    ((x >> qubit) & 1, self.images[2 * qubit]),
                    ((z >> qubit) & 1, self.images[2 * qubit + 1]),
                ):
                    if not use:
                        continue
                    bx, bz, bsign = image
                    k += 2 * bsign + _popcount(bx & bz) + 2 * _popcount(az & bx)
                    ax ^= bx
                    az ^= bz

            residual = (k - _popcount(ax & az)) % 4
            if residual % 2:
                raise TableauInvariantError(
                    f"Conjugation of local Pauli {code} is not Hermitian."
                )
            out[code] = ax | (az << arity)
            flip[code] = residual // 2

        return out, flip

    ###########################################################################
    # Constructors

    @classmethod
    def identity(cls, arity: int = 1) -> "CliffordGate":
        return cls(arity, tuple((x, z, 0) for x, z in _generator_codes(arity)))

    @classmethod
    def hadamard(cls) -> "CliffordGate":
        return cls(1, ((0, 1, 0), (1, 0, 0)))

    @classmethod
    def phase(cls) -> "CliffordGate":
        return cls(1, ((1, 1, 0), (0, 1, 0)))

    @classmethod
    def cnot(cls) -> "CliffordGate":
        # Control is support qubit 0, target is support qubit 1
        return cls(2, ((0b11, 0, 0), (0, 0b01, 0), (0b10, 0, 0), (0, 0b11, 0)))

    @classmethod
    def from_paulis(cls, images: List[PauliString]) -> "CliffordGate":
        encoded = []
        for pauli in images:
            x = sum(int(bit) << i for i, bit in enumerate(pauli.x))
            z = sum(int(bit) << i for i, bit in enumerate(pauli.z))
            encoded.append((x, z, 0 if pauli.sign == 1 else 1))
        return cls(len(images) // 2, tuple(encoded))

    ###########################################################################

    def is_symplectic(self) -> bool:
        generators = _generator_codes(self.arity)
        for i, (gx1, gz1) in enumerate(generators):
            for j, (gx2, gz2) in enumerate(generators):
                x1, z1, _ = self.images[i]
                x2, z2, _ = self.images[j]
                if _symplectic_form(x1, z1, x2, z2) != _symplectic_form(
                    gx1, gz1, gx2, gz2
                ):
                    return False
        return all(x or z for x, z, _ in self.images)

    def inverse(self) -> "CliffordGate":
        """
        If U sigma_q U^dag = (-1)^f g for a generator g, then U^dag g U is
        (-1)^f sigma_q, which is the inverse gate's image of g.
        """
        arity = self.arity
        mask = (1 << arity) - 1
        images = []
        for x, z in _generator_codes(arity):
            target = x | (z << arity)
            (source,) = np.flatnonzero(self.lookup_out == target)
            flip = int(self.lookup_flip[source])
            images.append((int(source) & mask, int(source) >> arity, flip))
        return CliffordGate(arity, tuple(images))

    def conjugate(self, pauli: PauliString) -> PauliString:
        """Image U P U^dag of a Pauli string on the gate support."""
        if pauli.n != self.arity:
            raise ValueError(
                f"Pauli string has length {pauli.n} but the gate acts on "
                f"{self.arity} qubit(s)."
            )

        arity = self.arity
        code = sum(int(pauli.x[i]) << i for i in range(arity))
        code |= sum(int(pauli.z[i]) << (i + arity) for i in range(arity))
        out = int(self.lookup_out[code])
        sign = pauli.sign * (-1 if self.lookup_flip[code] else 1)
        x = np.array([(out >> i) & 1 for i in range(arity)], dtype=bool)
        z = np.array([(out >> (i + arity)) & 1 for i in range(arity)], dtype=bool)
        return PauliString(x, z, sign)

    def image_paulis(self) -> List[PauliString]:
        return [
            PauliString(
                np.array([(x >> i) & 1 for i in range(self.arity)], dtype=bool),
                np.array([(z >> i) & 1 for i in range(self.arity)], dtype=bool),
                -1 if sign else 1,
            )
            for x, z, sign in self.images
        ]

    def to_bytes(self) -> bytes:
        flat = [self.arity] + [value for image in self.images for value in image]
        return bytes(flat)


###############################################################################


_TWO_QUBIT_PAULIS = [(code & 0b11, code >> 2) for code in range(1, 16)]


def sample_random_clifford_2q(stream: np.random.Generator) -> CliffordGate:
    """
    Draw a two-qubit Clifford uniformly (modulo global phase) by the symplectic
    construction: image of X_0 among the 15 non-identity Paulis, image of Z_0
    among the 8 that anticommute with it, image of X_1 among the 3 non-identity
    elements of their centralizer, image of Z_1 among the 2 centralizer elements
    anticommuting with it, then 4 independent sign bits.

    Parameters
    ----------
    stream: np.random.Generator
        Source of randomness, typically a keyed per-gate stream.

    Returns
    -------
    gate: CliffordGate
        The sampled gate.
    """

    def choose(candidates: List[Tuple[int, int]]) -> Tuple[int, int]:
        return candidates[int(stream.integers(len(candidates)))]

    x_0 = choose(_TWO_QUBIT_PAULIS)
    z_0 = choose([q for q in _TWO_QUBIT_PAULIS if _symplectic_form(*x_0, *q)])
    centralizer = [
        q
        for q in _TWO_QUBIT_PAULIS
        if not _symplectic_form(*x_0, *q) and not _symplectic_form(*z_0, *q)
    ]
    x_1 = choose(centralizer)
    z_1 = choose([q for q in centralizer if _symplectic_form(*x_1, *q)])
    signs = stream.integers(2, size=4)

    return CliffordGate(
        2,
        tuple(
            (x, z, int(sign)) for (x, z), sign in zip((x_0, z_0, x_1, z_1), signs)
        ),
    )
