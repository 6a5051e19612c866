#!/usr/bin/env python
# -*- coding: utf-8 -*-

import logging
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Dict, Optional, Tuple, Type, TypeVar

import yaml

from .. import constants
from ..exceptions import ConflictingArgumentsError
from ..nn.training import TrainConfig
from ..types import PathLike
from ..utils import io_utils

###############################################################################

log = logging.getLogger(__name__)

###############################################################################

ConfigType = TypeVar("ConfigType")

DESK_SAMPLE_GRID = (250, 500, 1000, 2000, 4000)

WINDOW_LIGHTCONE = "lightcone"
WINDOW_WHOLE = "whole"
WINDOW_MODES = (WINDOW_LIGHTCONE, WINDOW_WHOLE)

ESTIMATOR_CENTRAL = "central"
ESTIMATOR_FIT = "fit"
ESTIMATORS = (ESTIMATOR_CENTRAL, ESTIMATOR_FIT)

SOURCE_EXACT = "exact"
SOURCE_LEARNED = "learned"
SOURCES = (SOURCE_EXACT, SOURCE_LEARNED)

###############################################################################


@dataclass(frozen=True)
class HistogramConfig:
    L: int = 16
    T: int = 10
    p: float = 0.3
    N_c: int = 1000
    init: str = constants.INIT_PRODUCT
    base_seed: int = 0
    scheduler: str = "threads"


@dataclass(frozen=True)
class ComplexityConfig:
    """
    Postselected learning complexity M̄(t_p).

    `window_mode` is "lightcone" (box around the partner) or "whole" (all sites,
    layers up to t_p).
    """

    p: float = 0.3
    L: int = 16
    t_p: Tuple[int, ...] = (1, 2, 3, 4)
    N_c: int = 10
    window_mode: str = WINDOW_LIGHTCONE
    init: str = constants.INIT_PRODUCT
    base_seed: int = 0
    epsilon: float = constants.LEARNING_ERROR
    failure_fraction: float = constants.FAILURE_FRACTION
    sample_grid: Tuple[int, ...] = DESK_SAMPLE_GRID
    n_test: int = constants.TEST_SET_SIZE
    generation_cap: int = constants.GENERATION_CAP
    velocity: int = constants.LIGHTCONE_VELOCITY
    padding: int = constants.LIGHTCONE_PADDING
    train: TrainConfig = field(default_factory=TrainConfig)
    scheduler: str = "threads"

    def __post_init__(self) -> None:
        if self.window_mode not in WINDOW_MODES:
            raise ConflictingArgumentsError(
                f"window_mode must be one of {WINDOW_MODES} "
                f"(received '{self.window_mode}')."
            )


@dataclass(frozen=True)
class LearnabilityConfig:
    p: float = 0.3
    L: int = 16
    T: int = 10
    N_t: Tuple[int, ...] = DESK_SAMPLE_GRID
    N_c: int = 20
    init: str = constants.INIT_PRODUCT
    base_seed: int = 0
    epsilon: float = constants.LEARNING_ERROR
    n_test: int = constants.TEST_SET_SIZE
    train: TrainConfig = field(default_factory=TrainConfig)
    scheduler: str = "threads"


@dataclass(frozen=True)
class CoherentInfoConfig:
    """
    Exact S_Q(t) for every (p, L) and, when `learned` is set, the learned
    estimate at the given depths with one frozen budget N_t.
    """

    p: Tuple[float, ...] = (0.1, 0.3)
    L: Tuple[int, ...] = (16,)
    T: int = 16
    N_c: int = 200
    learned: bool = False
    depths: Optional[Tuple[int, ...]] = None
    N_t: int = 2000
    init: str = constants.INIT_PRODUCT
    base_seed: int = 0
    epsilon: float = constants.LEARNING_ERROR
    n_test: int = constants.TEST_SET_SIZE
    train: TrainConfig = field(default_factory=TrainConfig)
    scheduler: str = "threads"


@dataclass(frozen=True)
class CrossingConfig:
    """
    Decay-rate crossing. `T` defaults, per size, to the smallest depth covering
    the derivative stencil at t_d = round(τ_d L).
    """

    p: Tuple[float, ...] = (0.08, 0.10, 0.12, 0.14, 0.16, 0.18, 0.20, 0.22, 0.24)
    L: Tuple[int, ...] = (8, 12, 16)
    tau_d: float = 0.125
    T: Optional[int] = None
    N_c: int = 500
    source: str = SOURCE_EXACT
    estimator: str = ESTIMATOR_CENTRAL
    fit_half_width: int = 2
    N_t: int = 2000
    init: str = constants.INIT_PRODUCT
    base_seed: int = 0
    epsilon: float = constants.LEARNING_ERROR
    n_test: int = constants.TEST_SET_SIZE
    train: TrainConfig = field(default_factory=TrainConfig)
    scheduler: str = "threads"

    def __post_init__(self) -> None:
        if self.source not in SOURCES:
            raise ConflictingArgumentsError(
                f"source must be one of {SOURCES} (received '{self.source}')."
            )
        if self.estimator not in ESTIMATORS:
            raise ConflictingArgumentsError(
                f"estimator must be one of {ESTIMATORS} "
                f"(received '{self.estimator}')."
            )


@dataclass(frozen=True)
class ScalabilityConfig:
    L: int = 16
    L_B: Tuple[int, ...] = (4, 8, 12, 16)
    p: float = 0.3
    T: int = 10
    N_c: int = 20
    N_t: int = 2000
    init: str = constants.INIT_PRODUCT
    base_seed: int = 0
    epsilon: float = constants.LEARNING_ERROR
    n_test: int = 1000
    train: TrainConfig = field(default_factory=TrainConfig)
    scheduler: str = "threads"

    def __post_init__(self) -> None:
        too_wide = [width for width in self.L_B if width > self.L]
        if too_wide:
            raise ConflictingArgumentsError(
                f"Sub-circuit widths {too_wide} exceed the parent width L={self.L}."
            )


@dataclass(frozen=True)
class AppendixBConfig:
    """
    Step-model reconstruction of R_l(N_t) from r_p and M̄(t_p). With `compare`
    set the learnability curve is also measured on fresh circuits.
    """

    p: float = 0.3
    L: int = 16
    T: int = 10
    N_c_hist: int = 1000
    t_p: Tuple[int, ...] = (1, 2, 3, 4)
    N_c: int = 10
    N_t: Tuple[int, ...] = DESK_SAMPLE_GRID
    compare: bool = True
    N_c_compare: int = 20
    init: str = constants.INIT_PRODUCT
    base_seed: int = 0
    epsilon: float = constants.LEARNING_ERROR
    n_test: int = constants.TEST_SET_SIZE
    generation_cap: int = constants.GENERATION_CAP
    train: TrainConfig = field(default_factory=TrainConfig)
    scheduler: str = "threads"


###############################################################################


def config_from_dict(cls: Type[ConfigType], values: Dict[str, Any]) -> ConfigType:
    """
    Build an experiment config from plain values.

    Lists become tuples, the `train` block becomes a TrainConfig.

    Raises
    ------
    ConflictingArgumentsError
        Keys the config class does not define.
    """
    known = {f.name for f in fields(cls)}  # type: ignore
    unknown = set(values) - known
    if unknown:
        raise ConflictingArgumentsError(
            f"Unknown {cls.__name__} options: {sorted(unknown)}"
        )

    parsed: Dict[str, Any] = {}
    for key, value in values.items():
        if key == "train":
            parsed[key] = TrainConfig.from_dict(value or {})
        elif isinstance(value, list):
            parsed[key] = tuple(value)
        else:
            parsed[key] = value

    return cls(**parsed)


def config_to_dict(config: Any) -> Dict[str, Any]:
    """Plain JSON / YAML compatible echo of a config."""
    values = asdict(config)
    return {
        key: list(value) if isinstance(value, tuple) else value
        for key, value in values.items()
    }


def load_config(
    cls: Type[ConfigType],
    uri: Optional[PathLike] = None,
    overrides: Optional[Dict[str, Any]] = None,
    fs_kwargs: Dict[str, Any] = {},
) -> ConfigType:
    """
    Read an experiment config from a YAML document.

    Parameters
    ----------
    cls: Type[ConfigType]
        The config dataclass to build.
    uri: Optional[PathLike]
        YAML document. None uses the defaults.
    overrides: Optional[Dict[str, Any]]
        Values replacing those of the document, for example from command line
        flags. None values are ignored.
    fs_kwargs: Dict[str, Any]
        Keyword arguments for the fsspec filesystem.
        Default: {}
    """
    values: Dict[str, Any] = {}
    if uri is not None:
        loaded = yaml.safe_load(io_utils.read_bytes(uri, fs_kwargs=fs_kwargs))
        if loaded is not None and not isinstance(loaded, dict):
            raise ConflictingArgumentsError(
                f"Experiment config {uri} must be a mapping, "
                f"received {type(loaded).__name__}."
            )
        values.update(loaded or {})

    for key, value in (overrides or {}).items():
        if value is not None:
            values[key] = value

    config = config_from_dict(cls, values)
    log.debug(f"Loaded {config}")
    return config
