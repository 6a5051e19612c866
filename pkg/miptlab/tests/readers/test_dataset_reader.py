#!/usr/bin/env python
# -*- coding: utf-8 -*-

from pathlib import Path

import numpy as np
import pytest

from miptlab import exceptions
from miptlab.readers import CheckpointReader, DatasetReader
from miptlab.trajectories import Dataset, generate_dataset, read_dataset
from miptlab.types import WindowSpec
from miptlab.writers import DatasetWriter

from ..conftest import purified_circuit, unpurified_circuit

###############################################################################


def assert_datasets_equal(a: Dataset, b: Dataset) -> None:
    assert (a.L, a.T, a.p, a.circuit_seed) == (b.L, b.T, b.p, b.circuit_seed)
    assert a.axis == b.axis
    assert a.window == b.window
    np.testing.assert_array_equal(a.outcomes, b.outcomes)
    np.testing.assert_array_equal(a.labels, b.labels)
    np.testing.assert_array_equal(a.trajectory_seeds, b.trajectory_seeds)
    assert a.outcomes.dtype == b.outcomes.dtype


@pytest.mark.parametrize("variant", ["full", "cropped", "forced"])
def test_round_trip(tmp_path: Path, variant: str) -> None:
    if variant == "forced":
        dataset = generate_dataset(unpurified_circuit(), 20, force=True)
    else:
        instance = purified_circuit(L=6, T=5, p=0.3)
        dataset = generate_dataset(instance, 20, seed_offset=7)
        if variant == "cropped":
            dataset = dataset.crop(WindowSpec(instance.ref_site, 4, 3))

    uri = tmp_path / f"{variant}.mipt"
    DatasetWriter.save(dataset, uri)
    assert DatasetReader.is_supported_file(uri)
    assert not CheckpointReader.is_supported_file(uri)

    reader = DatasetReader(uri)
    assert "DatasetReader" in str(reader)
    assert_datasets_equal(reader.data, dataset)
    assert_datasets_equal(read_dataset(uri), dataset)


def test_memory_filesystem() -> None:
    dataset = generate_dataset(purified_circuit(L=4, T=4, p=0.4), 5)
    DatasetWriter.save(dataset, "memory://miptlab-tests/set.mipt")
    assert_datasets_equal(read_dataset("memory://miptlab-tests/set.mipt"), dataset)


def test_record_layout() -> None:
    dataset = generate_dataset(purified_circuit(L=4, T=4, p=0.4), 3)
    payload = DatasetWriter.to_bytes(dataset)
    # 45 byte header, then 16 outcome bytes, a label and an 8 byte seed per record
    assert len(payload) == 45 + 3 * (16 + 1 + 8)
    assert payload[:8] == b"MIPT-DS\x00"


@pytest.mark.parametrize(
    "payload",
    [
        pytest.param(
            b"NOT-MIPT\x01\x00" + bytes(40),
            marks=pytest.mark.raises(exception=exceptions.UnsupportedFileFormatError),
        ),
        pytest.param(
            b"MIPT-DS\x00\x09\x00" + bytes(40),
            marks=pytest.mark.raises(exception=exceptions.UnsupportedFileFormatError),
        ),
        pytest.param(
            b"MIPT",
            marks=pytest.mark.raises(exception=exceptions.UnsupportedFileFormatError),
        ),
    ],
)
def test_unsupported_file(tmp_path: Path, payload: bytes) -> None:
    uri = tmp_path / "bad.mipt"
    uri.write_bytes(payload)
    DatasetReader(uri)


@pytest.mark.parametrize("cut", [3, 30])
def test_truncated_file(tmp_path: Path, cut: int) -> None:
    dataset = generate_dataset(purified_circuit(L=4, T=4, p=0.4), 3)
    payload = DatasetWriter.to_bytes(dataset)

    uri = tmp_path / "truncated.mipt"
    uri.write_bytes(payload[:-cut] if cut < 45 else payload[:cut])
    reader = DatasetReader(uri)
    with pytest.raises(exceptions.CorruptFileError):
        reader.data


def test_trailing_bytes(tmp_path: Path) -> None:
    dataset = generate_dataset(purified_circuit(L=4, T=4, p=0.4), 3)
    uri = tmp_path / "overlong.mipt"
    uri.write_bytes(DatasetWriter.to_bytes(dataset) + b"\x00")

    reader = DatasetReader(uri)
    with pytest.raises(exceptions.CorruptFileError, match="overlong"):
        reader.data


@pytest.mark.parametrize(
    "filename",
    [
        pytest.param(
            "missing.mipt", marks=pytest.mark.raises(exception=FileNotFoundError)
        )
    ],
)
def test_missing_file(tmp_path: Path, filename: str) -> None:
    DatasetReader(tmp_path / filename)
