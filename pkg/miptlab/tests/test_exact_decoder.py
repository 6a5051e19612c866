#!/usr/bin/env python
# -*- coding: utf-8 -*-

import json
from pathlib import Path

import numpy as np
import pytest

from miptlab.circuits import CircuitSpec, build_circuit
from miptlab.exact_decoder import (
    AffineSignFunction,
    KeyMeasurementPredictor,
    SymbolicTableau,
    analyze_circuit,
    check_constraints,
    key_set_in_window,
    predict,
    replay_with_forced_outcomes,
    write_report,
)
from miptlab.exceptions import CircuitNotDecodableError, WindowTooSmallError
from miptlab.stabilizer import CliffordGate
from miptlab.trajectories import (
    full_window,
    generate_dataset,
    lightcone_window,
    run_trajectory,
)
from miptlab.types import Axis, WindowSpec

from .conftest import purified_circuit, purified_circuits, unpurified_circuit

###############################################################################

CASES = [
    dict(L=4, T=4, p=0.4, base_seed=0),
    dict(L=6, T=6, p=0.3, base_seed=1),
    dict(L=8, T=8, p=0.2, base_seed=2),
    dict(L=8, T=6, p=0.5, base_seed=3),
]


@pytest.mark.parametrize("case", CASES)
def test_prediction_matches_labels(case: dict) -> None:
    instance = purified_circuit(**case)
    report = analyze_circuit(instance)

    assert len(report.key_set) > 0
    assert report.constant in (-1, 1)
    assert set(report.key_set) <= set(report.undetermined_slots)
    slots = report.undetermined_slots + report.determined_slots
    assert sorted(slots) == sorted(instance.slots())

    for seed in range(40):
        record = run_trajectory(instance, seed)
        assert record.t_p == report.purification_time
        assert record.axis == report.axis
        assert predict(report, record) == record.label
        assert predict(report, record.outcomes) == record.label
        assert check_constraints(report, record)


def test_flipping_outcomes() -> None:
    instance = purified_circuit(L=8, T=8, p=0.3, base_seed=4)
    report = analyze_circuit(instance)
    record = run_trajectory(instance, 0)

    for slot in report.key_set:
        flipped = replay_with_forced_outcomes(
            instance, 0, {slot: -int(record.outcomes[slot])}
        )
        assert flipped.outcomes[slot] == -record.outcomes[slot]
        assert flipped.label == -record.label  # type: ignore

    for slot in set(report.undetermined_slots) - set(report.key_set):
        kept = replay_with_forced_outcomes(
            instance, 0, {slot: -int(record.outcomes[slot])}
        )
        assert kept.label == record.label
        assert check_constraints(report, kept)


def test_predictor_has_zero_error() -> None:
    instance = purified_circuit(L=6, T=6, p=0.3, base_seed=5)
    report = analyze_circuit(instance)
    dataset = generate_dataset(instance, 60)

    predictor = KeyMeasurementPredictor(report, None, instance.n_sites)
    np.testing.assert_array_equal(predictor.predict(dataset.images()), dataset.labels)
    np.testing.assert_array_equal(
        predictor.predict_proba(dataset.images()), dataset.targets()
    )


def test_windows() -> None:
    instance = purified_circuit(L=8, T=6, p=0.3, base_seed=6)
    report = analyze_circuit(instance)
    L = instance.n_sites

    assert key_set_in_window(report, full_window(instance), L)

    key_layer, key_site = report.key_set[0]
    blind = WindowSpec((key_site + L // 2) % L, 1, instance.depth)
    assert not key_set_in_window(report, blind, L)
    with pytest.raises(WindowTooSmallError):
        KeyMeasurementPredictor(report, blind, L)

    shallow = WindowSpec(instance.ref_site, L, key_layer)
    assert not key_set_in_window(report, shallow, L)

    window = lightcone_window(instance, report.purification_time)
    if key_set_in_window(report, window, L):
        dataset = generate_dataset(instance, 20, window=window)
        predictor = KeyMeasurementPredictor(report, window, L)
        predictions = predictor.predict(dataset.outcomes)
        np.testing.assert_array_equal(predictions, dataset.labels)
        for outcomes, label in zip(dataset.outcomes, dataset.labels):
            assert predict(report, outcomes, window=window, n_sites=L) == label


def test_window_needs_width() -> None:
    instance = purified_circuit(L=4, T=4, p=0.4)
    report = analyze_circuit(instance)
    record = run_trajectory(instance, 0)
    with pytest.raises(ValueError):
        predict(report, record, window=full_window(instance))


@pytest.mark.parametrize(
    "L, T",
    [
        pytest.param(
            4, 3, marks=pytest.mark.raises(exception=CircuitNotDecodableError)
        ),
        pytest.param(
            8, 2, marks=pytest.mark.raises(exception=CircuitNotDecodableError)
        ),
    ],
)
def test_unpurified_circuit(L: int, T: int) -> None:
    analyze_circuit(unpurified_circuit(L=L, T=T))


def test_validated_analysis() -> None:
    instance = purified_circuit(L=6, T=6, p=0.4, base_seed=7)
    assert analyze_circuit(instance, validate=True) == analyze_circuit(instance)


def test_full_measurement_single_layer() -> None:
    instance = build_circuit(CircuitSpec(L=4, T=1, p=1.0, circuit_seed=3))
    report = analyze_circuit(instance)
    assert report.purification_time == 1
    assert len(report.determined_slots) < instance.n_sites
    for seed in range(10):
        record = run_trajectory(instance, seed)
        assert predict(report, record) == record.label


def test_affine_sign_function() -> None:
    function = AffineSignFunction(1, (0, 2))
    assert function.evaluate(np.array([0, 1, 0])) == -1
    assert function.evaluate(np.array([1, 1, 0])) == 1
    assert function.evaluate(np.array([1, 0, 1])) == -1
    assert (function ^ 1).evaluate(np.array([0, 0, 0])) == 1


def test_symbolic_tableau_variables() -> None:
    t = SymbolicTableau(3)
    t.apply_gate(CliffordGate.hadamard(), [0])
    t.apply_gate(CliffordGate.cnot(), [0, 2])

    first, determined = t.measure_z(0)
    assert not determined
    assert first == AffineSignFunction(0, (0,))
    assert t.n_variables == 1

    repeat, determined = t.measure_z(0)
    assert determined
    assert repeat == AffineSignFunction(0, (0,))

    axis, sign = t.reference_function()  # type: ignore
    assert axis == Axis.Z
    assert sign == AffineSignFunction(0, (0,))
    t.validate()


def test_symbolic_tableau_grows_capacity() -> None:
    t = SymbolicTableau(4, validate=False)
    for _ in range(70):
        t.apply_gate(CliffordGate.hadamard(), [1])
        t.measure_z(1)
    assert t.n_variables == 70
    t.validate()


def test_report_serialization(tmp_path: Path) -> None:
    instance = purified_circuit(L=6, T=6, p=0.3, base_seed=8)
    report = analyze_circuit(instance)
    write_report(report, tmp_path / "report.json")

    values = json.loads((tmp_path / "report.json").read_text())
    assert values["fingerprint"] == instance.fingerprint()
    assert values["axis"] == report.axis.name
    assert values["c"] == report.constant
    assert [tuple(slot) for slot in values["key_set"]] == list(report.key_set)
    assert len(values["constraints"]) == len(report.determined_slots)
    assert values == report.to_dict()

    flags = report.determined_flags
    assert list(flags) == sorted(instance.slots())
    assert sum(flags.values()) == len(report.determined_slots)


@pytest.mark.slow
def test_key_sets_stay_inside_the_lightcone() -> None:
    circuits = purified_circuits(L=32, T=12, p=0.3, count=200)
    assert len(circuits) == 200

    inside = 0
    for instance in circuits:
        report = analyze_circuit(instance)
        window = lightcone_window(instance, report.purification_time)
        inside += key_set_in_window(report, window, instance.n_sites)
    assert inside >= 0.95 * len(circuits)
