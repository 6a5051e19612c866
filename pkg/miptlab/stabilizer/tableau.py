#!/usr/bin/env python
# -*- coding: utf-8 -*-

import logging
from typing import Any, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..exceptions import InvalidSiteError, TableauInvariantError
from ..types import Axis, RefStatus
from ..utils import gf2
from ..utils.random_streams import RandomBitStream
from .clifford import CliffordGate
from .pauli import PauliString

###############################################################################

log = logging.getLogger(__name__)

###############################################################################


def _pair_phase(
    xh: np.ndarray, zh: np.ndarray, xp: np.ndarray, zp: np.ndarray
) -> np.ndarray:
    """
    Sign bit picked up by each product P_h P_p of packed rows, beyond the XOR of
    the two input signs. Only meaningful when the pair commutes.
    """
    a = gf2.popcount(xh & zh) + gf2.popcount(xp & zp)
    b = gf2.parity(zh & xp).astype(np.int64)
    c = gf2.popcount((xh ^ xp) & (zh ^ zp))
    return (((a + 2 * b - c) % 4) // 2).astype(np.uint8)


def _chain_phase(
    x_rows: np.ndarray, z_rows: np.ndarray
) -> Tuple[np.ndarray, np.ndarray, int]:
    """
    Product of k packed commuting rows taken in order. Returns the packed X and Z
    parts of the product and the sign bit picked up beyond the XOR of the inputs.
    """
    a = int(gf2.popcount(x_rows & z_rows).sum())
    z_before = np.bitwise_xor.accumulate(z_rows, axis=0)
    z_before = np.concatenate(
        [np.zeros((1, z_rows.shape[1]), dtype=np.uint64), z_before[:-1]]
    )
    b = int(gf2.parity(z_before & x_rows).sum())
    x = np.bitwise_xor.reduce(x_rows, axis=0)
    z = np.bitwise_xor.reduce(z_rows, axis=0)
    c = int(gf2.popcount(x & z))
    return x, z, ((a + 2 * b - c) % 4) // 2


class Tableau:
    """
    Stabilizer state of `n_total` qubits in the destabilizer-augmented
    (Aaronson-Gottesman) representation.

    Rows 0..n-1 are destabilizers, rows n..2n-1 are stabilizers; X and Z parts are
    bit-packed 64 qubits per word and every row carries a sign bit (1 for -1).
    The initial state is |0...0>.

    Parameters
    ----------
    n_total: int
        Number of qubits, at least 2 (system qubits plus the reference).
    bit_stream: Optional[RandomBitStream]
        Source of undetermined measurement outcomes. Required before the first
        undetermined measurement.
        Default: None
    validate: bool
        Check every tableau invariant after each operation. Slow, debug only.
        Default: False

    Notes
    -----
    A Tableau is single-writer. Independent tableaus (each with its own stream)
    may evolve concurrently.
    """

    def __init__(
        self,
        n_total: int,
        bit_stream: Optional[RandomBitStream] = None,
        validate: bool = False,
    ):
        if n_total < 2:
            raise ValueError(
                f"A tableau needs at least 2 qubits (received n_total={n_total})."
            )

        self._n = n_total
        identity = np.eye(n_total, dtype=bool)
        empty = np.zeros((n_total, n_total), dtype=bool)
        self._x = gf2.pack_bits(np.vstack([identity, empty]))
        self._z = gf2.pack_bits(np.vstack([empty, identity]))
        self._r = np.zeros(2 * n_total, dtype=np.uint8)

        self.bit_stream = bit_stream
        self.validate_each_step = validate

    @property
    def n_total(self) -> int:
        return self._n

    @property
    def stabilizers(self) -> List[PauliString]:
        return [self._row_pauli(row) for row in range(self._n, 2 * self._n)]

    @property
    def destabilizers(self) -> List[PauliString]:
        return [self._row_pauli(row) for row in range(self._n)]

    def copy(self) -> "Tableau":
        """Independent copy of the state. The bit stream object is shared."""
        other = self.__class__.__new__(self.__class__)
        other.__dict__.update(
            {
                key: value.copy() if isinstance(value, np.ndarray) else value
                for key, value in self.__dict__.items()
            }
        )
        return other

    ###########################################################################
    # Sign hooks. Subclasses that track signs symbolically override these.

    def _rowsum_signs(
        self, targets: np.ndarray, source: int, phase: np.ndarray
    ) -> None:
        self._r[targets] ^= self._r[source] ^ phase

    def _product_sign(self, rows: np.ndarray, phase: int) -> Any:
        return int(np.bitwise_xor.reduce(self._r[rows], initial=0) ^ phase)

    def _copy_row(self, dst: int, src: int) -> None:
        self._x[dst] = self._x[src]
        self._z[dst] = self._z[src]
        self._r[dst] = self._r[src]

    def _set_random_sign(self, row: int, sign_bit: int, forced: Optional[int]) -> int:
        """Assign the sign of a freshly measured row, returning the outcome bit."""
        if self.bit_stream is None:
            raise ValueError(
                "Undetermined measurement requires a bit stream on the tableau."
            )

        bit = self.bit_stream.next_bit()
        if forced is not None:
            bit = 0 if forced == 1 else 1
        self._r[row] = bit ^ sign_bit
        return bit

    def _outcome_of(self, sign: Any, sign_bit: int) -> Any:
        return 1 - 2 * (int(sign) ^ sign_bit)

    ###########################################################################

    def _row_pauli(self, row: int) -> PauliString:
        return PauliString(
            gf2.unpack_bits(self._x[row], self._n),
            gf2.unpack_bits(self._z[row], self._n),
            -1 if self._r[row] else 1,
        )

    def _check_sites(self, sites: Sequence[int]) -> None:
        for site in sites:
            if not 0 <= site < self._n:
                raise InvalidSiteError(
                    f"Qubit index {site} out of range for {self._n} qubits."
                )
        if len(set(sites)) != len(sites):
            raise InvalidSiteError(f"Duplicate qubit indices in {tuple(sites)}.")

    def _after_operation(self) -> None:
        if self.validate_each_step:
            self.validate()

    def _rowsum(self, targets: np.ndarray, source: int) -> None:
        if len(targets) == 0:
            return

        xh, zh = self._x[targets], self._z[targets]
        xp, zp = self._x[source], self._z[source]
        phase = _pair_phase(xh, zh, xp, zp)
        self._x[targets] = xh ^ xp
        self._z[targets] = zh ^ zp
        self._rowsum_signs(targets, source, phase)

    ###########################################################################

    def apply_gate(self, gate: CliffordGate, sites: Sequence[int]) -> None:
        """
        Conjugate every row by a Clifford gate acting on `sites`.

        Parameters
        ----------
        gate: CliffordGate
            The gate to apply.
        sites: Sequence[int]
            Distinct qubit indices, one per gate qubit, in gate-support order.

        Raises
        ------
        InvalidSiteError
            Sites out of range, duplicated, or not matching the gate arity.
        """
        sites = list(sites)
        if len(sites) != gate.arity:
            raise InvalidSiteError(
                f"Gate of arity {gate.arity} applied to {len(sites)} site(s)."
            )
        self._check_sites(sites)

        arity = gate.arity
        codes = np.zeros(2 * self._n, dtype=np.int64)
        for i, site in enumerate(sites):
            codes |= gf2.get_bit(self._x, site).astype(np.int64) << i
            codes |= gf2.get_bit(self._z, site).astype(np.int64) << (i + arity)

        out = gate.lookup_out[codes]
        for i, site in enumerate(sites):
            gf2.set_bit(self._x, site, (out >> i) & 1)
            gf2.set_bit(self._z, site, (out >> (i + arity)) & 1)
        self._r ^= gate.lookup_flip[codes]

        self._after_operation()

    def _anticommuting_rows(self, px: np.ndarray, pz: np.ndarray) -> np.ndarray:
        form = gf2.parity((self._x & pz) ^ (self._z & px))
        return np.flatnonzero(form)

    def _measure(
        self, pauli: PauliString, forced: Optional[int] = None
    ) -> Tuple[Any, bool]:
        n = self._n
        px = gf2.pack_bits(pauli.x)
        pz = gf2.pack_bits(pauli.z)
        sign_bit = 0 if pauli.sign == 1 else 1

        anticommuting = self._anticommuting_rows(px, pz)
        stabilizer_hits = anticommuting[anticommuting >= n]

        if len(stabilizer_hits) == 0:
            # P is (up to sign) the product of the stabilizers paired with the
            # destabilizers it anticommutes with
            rows = anticommuting + n
            _, _, phase = _chain_phase(self._x[rows], self._z[rows])
            sign = self._product_sign(rows, phase)
            return self._outcome_of(sign, sign_bit), True

        pivot = int(stabilizer_hits[0])
        others = anticommuting[anticommuting != pivot]
        self._rowsum(others, pivot)
        self._copy_row(pivot - n, pivot)
        self._x[pivot] = px
        self._z[pivot] = pz
        bit = self._set_random_sign(pivot, sign_bit, forced)

        self._after_operation()
        return self._outcome_of(bit, 0), False

    def is_stabilized(self, pauli: PauliString) -> bool:
        """Whether +P or -P belongs to the stabilizer group (P commutes with it)."""
        px = gf2.pack_bits(pauli.x)
        pz = gf2.pack_bits(pauli.z)
        return not np.any(self._anticommuting_rows(px, pz) >= self._n)

    def measure_z(self, site: int, forced: Optional[int] = None) -> Tuple[int, bool]:
        """
        Projectively measure Pauli Z on one qubit.

        Parameters
        ----------
        site: int
            Qubit index.
        forced: Optional[int]
            If given (+1 or -1) and the measurement is undetermined, use this
            outcome instead of the drawn bit. The bit is still consumed from the
            stream so later draws are unaffected.
            Default: None

        Returns
        -------
        outcome: int
            +1 or -1.
        determined: bool
            Whether the outcome was fixed by the stabilizer group.
        """
        self._check_sites([site])
        return self._measure(PauliString.single(self._n, site, Axis.Z), forced)

    def measure_pauli(
        self, pauli: PauliString, forced: Optional[int] = None
    ) -> Tuple[int, bool]:
        """Projectively measure an arbitrary Hermitian Pauli string."""
        if pauli.n != self._n:
            raise InvalidSiteError(
                f"Pauli string of length {pauli.n} on a {self._n}-qubit tableau."
            )
        if pauli.weight == 0:
            raise ValueError("Cannot measure the identity.")
        return self._measure(pauli, forced)

    ###########################################################################

    def _stabilizer_block(self, sites: Sequence[int]) -> np.ndarray:
        n = self._n
        x = gf2.unpack_bits(self._x[n:], n)[:, list(sites)]
        z = gf2.unpack_bits(self._z[n:], n)[:, list(sites)]
        return gf2.pack_bits(np.concatenate([x, z], axis=1))

    def subsystem_entropy(self, subset: Iterable[int]) -> int:
        """
        Entanglement entropy (in bits) of a subset of qubits.

        For a pure stabilizer state S_A = rank(G_A) - |A| where G_A is the
        stabilizer generator matrix restricted to the X and Z columns of A.

        Raises
        ------
        InvalidSiteError
            Empty subset, duplicated or out-of-range indices.
        """
        sites = sorted(subset)
        if len(sites) == 0:
            raise InvalidSiteError("Subsystem entropy of an empty subset.")
        self._check_sites(sites)

        return gf2.rank(self._stabilizer_block(sites), 2 * len(sites)) - len(sites)

    def _reference_element(self) -> Optional[Tuple[np.ndarray, int, int, int]]:
        """
        Stabilizer rows whose product acts only on the last qubit, with the X and
        Z bits of that product on the last qubit and its extra phase bit.
        """
        n = self._n
        reference = n - 1
        system_block = self._stabilizer_block(range(reference))
        nullspace = gf2.left_nullspace(system_block, 2 * reference)
        if len(nullspace) == 0:
            return None
        if len(nullspace) > 1:
            raise TableauInvariantError(
                "More than one independent stabilizer acts only on the reference."
            )

        rows = np.flatnonzero(gf2.unpack_bits(nullspace[0], n)) + n
        x, z, phase = _chain_phase(self._x[rows], self._z[rows])
        x_ref = int(gf2.get_bit(x, reference))
        z_ref = int(gf2.get_bit(z, reference))
        gf2.set_bit(x, reference, np.uint64(0))
        gf2.set_bit(z, reference, np.uint64(0))
        if np.any(x) or np.any(z) or not (x_ref or z_ref):
            raise TableauInvariantError(
                "Elimination residual: the reference element acts on system qubits."
            )
        return rows, x_ref, z_ref, phase

    def ref_status(self) -> RefStatus:
        """
        Purification status of the reference qubit (the last index).

        Returns
        -------
        status: RefStatus
            Mixed, or Purified with the axis and sign of the unique stabilizer
            group element supported only on the reference.
        """
        element = self._reference_element()
        if element is None:
            return RefStatus.mixed()

        rows, x_ref, z_ref, phase = element
        sign = self._product_sign(rows, phase)
        return RefStatus(True, Axis.from_bits(x_ref, z_ref), 1 - 2 * int(sign))

    ###########################################################################

    def canonical_stabilizers(self) -> List[PauliString]:
        """
        Stabilizer generators in reduced row echelon form with their signs; two
        tableaus describe the same state iff these lists are equal.
        """
        n = self._n
        matrix = gf2.pack_bits(
            np.concatenate(
                [gf2.unpack_bits(self._x[n:], n), gf2.unpack_bits(self._z[n:], n)],
                axis=1,
            )
        )
        reduction = gf2.row_reduce(matrix, 2 * n, track_transform=True)
        assert reduction.transform is not None

        canonical = []
        for combination in reduction.transform[: reduction.rank]:
            rows = np.flatnonzero(gf2.unpack_bits(combination, n)) + n
            x, z, phase = _chain_phase(self._x[rows], self._z[rows])
            sign = int(np.bitwise_xor.reduce(self._r[rows], initial=0) ^ phase)
            canonical.append(
                PauliString(
                    gf2.unpack_bits(x, n), gf2.unpack_bits(z, n), 1 - 2 * sign
                )
            )
        return canonical

    def validate(self) -> None:
        """
        Check the tableau invariants: stabilizers commute and are independent,
        destabilizer i anticommutes exactly with stabilizer i, destabilizers
        commute among themselves.

        Raises
        ------
        TableauInvariantError
            Any invariant is violated.
        """
        n = self._n
        x = gf2.unpack_bits(self._x, n).astype(np.int64)
        z = gf2.unpack_bits(self._z, n).astype(np.int64)
        form = (x @ z.T + z @ x.T) % 2

        expected = np.zeros((2 * n, 2 * n), dtype=np.int64)
        expected[np.arange(n), np.arange(n) + n] = 1
        expected[np.arange(n) + n, np.arange(n)] = 1
        if not np.array_equal(form, expected):
            raise TableauInvariantError(
                "Commutation relations of the tableau rows are violated."
            )

        stabilizer_matrix = gf2.pack_bits(
            np.concatenate([x[n:], z[n:]], axis=1).astype(bool)
        )
        rank = gf2.rank(stabilizer_matrix, 2 * n)
        if rank != n:
            raise TableauInvariantError(
                f"Stabilizer generators have GF(2) rank {rank}, expected {n}."
            )

    def __str__(self) -> str:
        rows = "\n".join(str(pauli) for pauli in self.stabilizers)
        return f"<Tableau n_total={self._n}>\n{rows}"


def new_tableau(
    n_total: int,
    bit_stream: Optional[RandomBitStream] = None,
    validate: bool = False,
) -> Tableau:
    """Tableau of |0...0> on n_total qubits."""
    return Tableau(n_total, bit_stream=bit_stream, validate=validate)
