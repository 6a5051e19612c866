#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Bit-packed linear algebra over GF(2).

Rows of a matrix are stored as little-endian bit vectors packed into uint64 words,
64 columns per word, so that row additions are single XORs over a few words.
"""

from typing import NamedTuple, Optional, Tuple

import numpy as np

###############################################################################

WORD_BITS = 64
ONE = np.uint64(1)

###############################################################################


class RowReduction(NamedTuple):
    """
    Result of reducing a packed matrix M to reduced row echelon form R.

    If the transform was tracked, `transform @ M == reduced` over GF(2) and the
    rows of `transform` from index `rank` onward span the left null space of M.
    """

    reduced: np.ndarray
    pivots: Tuple[int, ...]
    transform: Optional[np.ndarray]

    @property
    def rank(self) -> int:
        return len(self.pivots)


def n_words(n_bits: int) -> int:
    return max(1, (n_bits + WORD_BITS - 1) // WORD_BITS)


def zeros(n_rows: int, n_bits: int) -> np.ndarray:
    return np.zeros((n_rows, n_words(n_bits)), dtype=np.uint64)


def pack_bits(bits: np.ndarray) -> np.ndarray:
    """
    Pack the last axis of a boolean array into uint64 words.

    Parameters
    ----------
    bits: np.ndarray
        Array of shape (..., n) interpreted as booleans.

    Returns
    -------
    words: np.ndarray
        Array of shape (..., ceil(n / 64)) with dtype uint64.
    """
    bits = np.asarray(bits, dtype=bool)
    n = bits.shape[-1]
    width = n_words(n) * WORD_BITS
    if width != n:
        pad = [(0, 0)] * (bits.ndim - 1) + [(0, width - n)]
        bits = np.pad(bits, pad)

    packed = np.packbits(bits, axis=-1, bitorder="little")
    packed = np.ascontiguousarray(packed)
    return packed.view("<u8").astype(np.uint64)


def unpack_bits(words: np.ndarray, n_bits: int) -> np.ndarray:
    """Inverse of `pack_bits`, truncated to `n_bits` columns."""
    raw = np.ascontiguousarray(np.asarray(words, dtype=np.uint64).astype("<u8"))
    bits = np.unpackbits(raw.view(np.uint8), axis=-1, bitorder="little")
    return bits[..., :n_bits].astype(bool)


def get_bit(words: np.ndarray, index: int) -> np.ndarray:
    """Column `index` of a packed matrix (or bit `index` of a packed vector)."""
    word, bit = divmod(index, WORD_BITS)
    return ((words[..., word] >> np.uint64(bit)) & ONE).astype(np.uint8)


def set_bit(words: np.ndarray, index: int, value: np.ndarray) -> None:
    """Overwrite column `index` of a packed matrix in place."""
    word, bit = divmod(index, WORD_BITS)
    mask = ONE << np.uint64(bit)
    value = np.asarray(value, dtype=np.uint64) & ONE
    words[..., word] = (words[..., word] & ~mask) | (value << np.uint64(bit))


def popcount(words: np.ndarray) -> np.ndarray:
    """Number of set bits per packed row."""
    return np.bitwise_count(words).sum(axis=-1, dtype=np.int64)


def parity(words: np.ndarray) -> np.ndarray:
    """GF(2) sum of the bits of each packed row."""
    return (popcount(words) & 1).astype(np.uint8)


def select_columns(matrix: np.ndarray, columns: np.ndarray) -> np.ndarray:
    """Gather the given columns of a packed matrix into a new packed matrix."""
    columns = np.asarray(columns, dtype=np.int64)
    shifts = (columns % WORD_BITS).astype(np.uint64)
    bits = (matrix[:, columns // WORD_BITS] >> shifts) & ONE
    return pack_bits(bits.astype(bool))


def row_reduce(
    matrix: np.ndarray,
    n_cols: int,
    track_transform: bool = False,
) -> RowReduction:
    """
    Reduce a packed matrix to reduced row echelon form by word-parallel
    Gauss-Jordan elimination.

    Parameters
    ----------
    matrix: np.ndarray
        Packed matrix of shape (n_rows, words). Not modified.
    n_cols: int
        Number of meaningful columns.
    track_transform: bool
        Also accumulate the row operations applied, as a packed
        (n_rows, n_rows) matrix.
        Default: False

    Returns
    -------
    reduction: RowReduction
        The reduced matrix, pivot columns and optional transform.
    """
    work = np.array(matrix, dtype=np.uint64, copy=True)
    n_rows = work.shape[0]
    transform = pack_bits(np.eye(n_rows, dtype=bool)) if track_transform else None

    pivots = []
    row = 0
    for col in range(n_cols):
        if row == n_rows:
            break

        word, bit = divmod(col, WORD_BITS)
        mask = ONE << np.uint64(bit)
        candidates = (work[row:, word] & mask) != 0
        if not candidates.any():
            continue

        pivot = row + int(np.argmax(candidates))
        if pivot != row:
            work[[row, pivot]] = work[[pivot, row]]
            if transform is not None:
                transform[[row, pivot]] = transform[[pivot, row]]

        hits = (work[:, word] & mask) != 0
        hits[row] = False
        work[hits] ^= work[row]
        if transform is not None:
            transform[hits] ^= transform[row]

        pivots.append(col)
        row += 1

    return RowReduction(work, tuple(pivots), transform)


def rank(matrix: np.ndarray, n_cols: int) -> int:
    return row_reduce(matrix, n_cols).rank


def left_nullspace(matrix: np.ndarray, n_cols: int) -> np.ndarray:
    """
    Basis of {c : c M = 0} as packed rows over the rows of `matrix`.
    """
    reduction = row_reduce(matrix, n_cols, track_transform=True)
    assert reduction.transform is not None
    return reduction.transform[reduction.rank :]
