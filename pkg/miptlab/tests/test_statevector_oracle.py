#!/usr/bin/env python
# -*- coding: utf-8 -*-

from itertools import combinations

import numpy as np
import pytest

from miptlab.circuits import CircuitInstance, CircuitSpec, build_circuit, circuit_seeds
from miptlab.stabilizer import CliffordGate, PauliString, Tableau
from miptlab.types import Axis
from miptlab.utils.random_streams import RandomBitStream

from . import statevector_test_utils as sv

###############################################################################


def run_lockstep(instance: CircuitInstance, trajectory_seed: int) -> None:
    """
    Evolve a circuit on the tableau and the dense oracle side by side, checking
    every measurement, stabilizer and entropy against the oracle.
    """
    L = instance.n_sites
    n = L + 1
    t = Tableau(n, bit_stream=RandomBitStream(trajectory_seed, tag="trajectory"))
    psi = sv.zero_state(n)

    def gate(g: CliffordGate, sites: list) -> np.ndarray:
        t.apply_gate(g, sites)
        return sv.apply_gate(psi, g, sites, n)

    for layer in instance.scramble_prefix or ():
        for placement in layer:
            psi = gate(placement.gate, list(placement.sites))

    partner = instance.ref_site
    if not t.is_stabilized(PauliString.single(n, partner, Axis.X)):
        psi = gate(CliffordGate.hadamard(), [partner])
    psi = gate(CliffordGate.cnot(), [partner, L])
    assert sv.entropy(psi, [L], n) == pytest.approx(1.0)

    for layer in range(instance.depth):
        for placement in instance.gates[layer]:
            psi = gate(placement.gate, list(placement.sites))

        for site in instance.measure_sites[layer]:
            p_plus = sv.z_probability(psi, site, n, 1)
            outcome, determined = t.measure_z(site)
            if determined:
                assert sv.z_probability(psi, site, n, outcome) == pytest.approx(1.0)
            else:
                assert p_plus == pytest.approx(0.5)
            psi = sv.project_z(psi, site, n, outcome)

        for stabilizer in t.stabilizers:
            assert sv.expectation(psi, stabilizer) == pytest.approx(1.0)

        for size in (1, 2):
            for subset in combinations(range(n), size):
                dense = sv.entropy(psi, subset, n)
                assert dense == pytest.approx(round(dense), abs=1e-9)
                assert t.subsystem_entropy(subset) == round(dense)

        status = t.ref_status()
        assert status.purified == (sv.entropy(psi, [L], n) < 0.5)
        if status.purified:
            reference = PauliString.single(n, L, status.axis, sign=status.sign)
            assert sv.expectation(psi, reference) == pytest.approx(1.0)


@pytest.mark.parametrize("p", [0.2, 0.5])
@pytest.mark.parametrize("L", [2, 4])
@pytest.mark.parametrize("index", range(12))
def test_tableau_matches_statevector(L: int, p: float, index: int) -> None:
    seed = circuit_seeds(2024, 12)[index]
    instance = build_circuit(CircuitSpec(L=L, T=4, p=p, circuit_seed=seed))
    run_lockstep(instance, trajectory_seed=index)


@pytest.mark.parametrize("index", range(4))
def test_scrambled_initial_state_matches_statevector(index: int) -> None:
    seed = circuit_seeds(7, 4)[index]
    spec = CircuitSpec(L=4, T=3, p=0.5, circuit_seed=seed, init="scrambled")
    run_lockstep(build_circuit(spec), trajectory_seed=index)


def test_undetermined_outcome_distribution() -> None:
    # Joint outcome distribution of one small circuit against the Born rule
    template = CircuitSpec(L=4, T=2, p=0.5, circuit_seed=0)
    for seed in circuit_seeds(11, 100):
        instance = build_circuit(template.with_seed(seed))
        if 2 <= len(instance.slots()) <= 3:
            break
    n = instance.n_sites + 1
    n_shots = 10000

    def prepare() -> np.ndarray:
        psi = sv.zero_state(n)
        psi = sv.apply_gate(psi, CliffordGate.hadamard(), [instance.ref_site], n)
        return sv.apply_gate(psi, CliffordGate.cnot(), [instance.ref_site, n - 1], n)

    counts: dict = {}
    for shot in range(n_shots):
        t = Tableau(n, bit_stream=RandomBitStream(shot, tag="trajectory"))
        t.apply_gate(CliffordGate.hadamard(), [instance.ref_site])
        t.apply_gate(CliffordGate.cnot(), [instance.ref_site, n - 1])
        record = []
        for layer in range(instance.depth):
            for placement in instance.gates[layer]:
                t.apply_gate(placement.gate, placement.sites)
            for site in instance.measure_sites[layer]:
                record.append(t.measure_z(site)[0])
        counts[tuple(record)] = counts.get(tuple(record), 0) + 1

    distance = 0.0
    observed_probability = 0.0
    for record, count in counts.items():
        psi = prepare()
        probability = 1.0
        outcomes = iter(record)
        for layer in range(instance.depth):
            for placement in instance.gates[layer]:
                psi = sv.apply_gate(psi, placement.gate, list(placement.sites), n)
            for site in instance.measure_sites[layer]:
                outcome = next(outcomes)
                probability *= sv.z_probability(psi, site, n, outcome)
                psi = sv.project_z(psi, site, n, outcome)
        distance += abs(count / n_shots - probability)
        observed_probability += probability

    # Branches never sampled contribute their whole Born mass
    distance += 1.0 - observed_probability
    assert distance / 2 < 0.05
