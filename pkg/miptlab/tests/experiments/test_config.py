#!/usr/bin/env python
# -*- coding: utf-8 -*-

from pathlib import Path
from typing import Any, Dict, Type

import pytest

from miptlab.exceptions import ConflictingArgumentsError
from miptlab.experiments import (
    ComplexityConfig,
    CrossingConfig,
    HistogramConfig,
    ScalabilityConfig,
    load_config,
)
from miptlab.experiments.config import config_from_dict, config_to_dict
from miptlab.nn.training import TrainConfig

###############################################################################


def test_defaults() -> None:
    config = load_config(HistogramConfig)
    assert config == HistogramConfig()
    assert config.scheduler == "threads"


def test_overrides_skip_none() -> None:
    config = load_config(
        HistogramConfig, overrides={"L": 8, "p": None, "scheduler": "synchronous"}
    )
    assert config.L == 8
    assert config.p == HistogramConfig().p
    assert config.scheduler == "synchronous"


def test_yaml_config(tmp_path: Path) -> None:
    uri = tmp_path / "complexity.yaml"
    uri.write_text(
        "p: 0.2\n"
        "L: 8\n"
        "t_p: [1, 3]\n"
        "window_mode: whole\n"
        "sample_grid: [100, 200]\n"
        "train:\n"
        "  max_epochs: 7\n"
    )

    config = load_config(ComplexityConfig, uri, overrides={"L": 12})
    assert config.p == 0.2
    assert config.L == 12
    assert config.t_p == (1, 3)
    assert config.sample_grid == (100, 200)
    assert config.window_mode == "whole"
    assert isinstance(config.train, TrainConfig)
    assert config.train.max_epochs == 7


def test_empty_yaml(tmp_path: Path) -> None:
    uri = tmp_path / "empty.yaml"
    uri.write_text("")
    assert load_config(HistogramConfig, uri) == HistogramConfig()


@pytest.mark.parametrize(
    "cls, values",
    [
        pytest.param(
            HistogramConfig,
            {"bogus": 1},
            marks=pytest.mark.raises(exception=ConflictingArgumentsError),
        ),
        pytest.param(
            ComplexityConfig,
            {"window_mode": "diamond"},
            marks=pytest.mark.raises(exception=ConflictingArgumentsError),
        ),
        pytest.param(
            CrossingConfig,
            {"source": "guessed"},
            marks=pytest.mark.raises(exception=ConflictingArgumentsError),
        ),
        pytest.param(
            CrossingConfig,
            {"estimator": "spline"},
            marks=pytest.mark.raises(exception=ConflictingArgumentsError),
        ),
        pytest.param(
            ScalabilityConfig,
            {"L": 8, "L_B": [4, 12]},
            marks=pytest.mark.raises(exception=ConflictingArgumentsError),
        ),
        (ScalabilityConfig, {"L": 8, "L_B": [4, 8]}),
    ],
)
def test_config_from_dict(cls: Type[Any], values: Dict[str, Any]) -> None:
    config_from_dict(cls, values)


@pytest.mark.parametrize(
    "document",
    [
        pytest.param(
            "- 1\n- 2\n", marks=pytest.mark.raises(exception=ConflictingArgumentsError)
        ),
        pytest.param(
            "just text\n", marks=pytest.mark.raises(exception=ConflictingArgumentsError)
        ),
    ],
)
def test_non_mapping_document(tmp_path: Path, document: str) -> None:
    uri = tmp_path / "config.yaml"
    uri.write_text(document)
    load_config(HistogramConfig, uri)


def test_config_to_dict() -> None:
    values = config_to_dict(ComplexityConfig(t_p=(2, 4)))
    assert values["t_p"] == [2, 4]
    assert isinstance(values["sample_grid"], list)
    assert isinstance(values["train"], dict)
    assert values["train"]["max_epochs"] == TrainConfig().max_epochs

    # The echo loads back to the same config
    assert config_from_dict(ComplexityConfig, values) == ComplexityConfig(t_p=(2, 4))
