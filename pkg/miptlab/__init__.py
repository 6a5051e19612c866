#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Top-level package for miptlab."""

from .circuits import CircuitInstance, CircuitSpec, build_circuit  # noqa: F401
from .exact_decoder import analyze_circuit, predict  # noqa: F401
from .stabilizer import CliffordGate, PauliString, Tableau  # noqa: F401
from .trajectories import Dataset, generate_dataset, run_trajectory  # noqa: F401

__author__ = "miptlab developers"
__email__ = "miptlab-dev@users.noreply.github.com"
# Do not edit this string manually, always use bumpversion
# Details in CONTRIBUTING.md
__version__ = "0.1.0"


def get_module_version() -> str:
    return __version__
