#!/usr/bin/env python
# -*- coding: utf-8 -*-

from itertools import product
from typing import List

import numpy as np
import pytest
from scipy.stats import chisquare

from miptlab.stabilizer import CliffordGate, PauliString, sample_random_clifford_2q
from miptlab.stabilizer.clifford import TWO_QUBIT_GROUP_ORDER, _symplectic_form

from ..statevector_test_utils import gate_unitary, pauli_matrix

###############################################################################


def local_paulis(arity: int) -> List[PauliString]:
    labels = ["".join(letters) for letters in product("IXYZ", repeat=arity)]
    return [PauliString.from_label(label) for label in labels]


def random_gates(count: int, seed: int = 0) -> List[CliffordGate]:
    rng = np.random.default_rng(seed)
    return [sample_random_clifford_2q(rng) for _ in range(count)]


###############################################################################


@pytest.mark.parametrize(
    "gate, label, expected",
    [
        (CliffordGate.hadamard(), "X", "+Z"),
        (CliffordGate.hadamard(), "Y", "-Y"),
        (CliffordGate.phase(), "X", "+Y"),
        (CliffordGate.phase(), "Y", "-X"),
        (CliffordGate.cnot(), "XI", "+XX"),
        (CliffordGate.cnot(), "IZ", "+ZZ"),
        (CliffordGate.cnot(), "ZI", "+ZI"),
        (CliffordGate.cnot(), "YI", "+YX"),
        (CliffordGate.identity(2), "XY", "+XY"),
    ],
)
def test_named_gates(gate: CliffordGate, label: str, expected: str) -> None:
    assert str(gate.conjugate(PauliString.from_label(label))) == expected


@pytest.mark.parametrize(
    "arity, images",
    [
        # X and Z mapped to the same Pauli
        pytest.param(
            1, ((1, 0, 0), (1, 0, 0)), marks=pytest.mark.raises(exception=ValueError)
        ),
        # Identity image
        pytest.param(
            1, ((0, 0, 0), (0, 1, 0)), marks=pytest.mark.raises(exception=ValueError)
        ),
        # Images of different qubits anticommute
        pytest.param(
            2,
            ((0b01, 0, 0), (0, 0b01, 0), (0b10, 0, 0), (0, 0b11, 0)),
            marks=pytest.mark.raises(exception=ValueError),
        ),
        pytest.param(
            3,
            ((1, 0, 0),) * 6,
            marks=pytest.mark.raises(exception=ValueError),
        ),
    ],
)
def test_invalid_images(arity: int, images: tuple) -> None:
    CliffordGate(arity, images)


def test_lookup_matches_dense_conjugation() -> None:
    gates = random_gates(40) + [
        CliffordGate.hadamard(),
        CliffordGate.phase(),
        CliffordGate.cnot(),
    ]
    for gate in gates:
        unitary = gate_unitary(gate)
        assert np.allclose(unitary.conj().T @ unitary, np.eye(2**gate.arity))
        for pauli in local_paulis(gate.arity):
            dense = unitary @ pauli_matrix(pauli) @ unitary.conj().T
            assert np.allclose(dense, pauli_matrix(gate.conjugate(pauli)))


def test_inverse_undoes_conjugation() -> None:
    for gate in random_gates(50, seed=1) + [CliffordGate.phase()]:
        inverse = gate.inverse()
        for pauli in local_paulis(gate.arity):
            assert inverse.conjugate(gate.conjugate(pauli)) == pauli
            assert gate.conjugate(inverse.conjugate(pauli)) == pauli


def test_from_paulis_round_trip() -> None:
    for gate in random_gates(10, seed=2):
        rebuilt = CliffordGate.from_paulis(gate.image_paulis())
        assert rebuilt == gate
        assert rebuilt.to_bytes() == gate.to_bytes()


def test_group_order() -> None:
    # Symplectic image tuples of (X0, Z0, X1, Z1) times 2^4 sign choices
    codes = [(c & 0b11, c >> 2) for c in range(1, 16)]
    generators = [(0b01, 0), (0, 0b01), (0b10, 0), (0, 0b10)]
    expected_form = [
        [_symplectic_form(*a, *b) for b in generators] for a in generators
    ]
    count = 0
    for images in product(codes, repeat=4):
        form = [[_symplectic_form(*a, *b) for b in images] for a in images]
        count += form == expected_form

    assert count * 16 == TWO_QUBIT_GROUP_ORDER


def test_sampler_is_deterministic() -> None:
    first = random_gates(20, seed=5)
    second = random_gates(20, seed=5)
    assert [g.to_bytes() for g in first] == [g.to_bytes() for g in second]


def test_sampler_uniform_over_signed_images() -> None:
    # The image of X0 is uniform over the 15 non-identity Paulis with either sign
    n_draws = 30000
    counts = np.zeros(30, dtype=np.int64)
    for gate in random_gates(n_draws, seed=11):
        x, z, sign = gate.images[0]
        code = x | (z << 2)
        counts[2 * (code - 1) + sign] += 1

    assert counts.sum() == n_draws
    _, p_value = chisquare(counts)
    assert p_value > 1e-3

    # Full gates are spread over many distinct group elements
    distinct = {gate.to_bytes() for gate in random_gates(2000, seed=12)}
    assert len(distinct) > 1700
