#!/usr/bin/env python
# -*- coding: utf-8 -*-

from typing import List, Optional

import numpy as np
import pytest

from miptlab.circuits import CircuitInstance, CircuitSpec, build_circuit, circuit_seeds
from miptlab.trajectories import Dataset, purification_time
from miptlab.types import Axis, WindowSpec

###############################################################################

SYNC = "synchronous"

scheduler = pytest.mark.parametrize("scheduler", ["synchronous", "threads"])


def purified_circuit(
    L: int,
    T: int,
    p: float,
    base_seed: int = 0,
    t_p: Optional[int] = None,
    max_tries: int = 2000,
) -> CircuitInstance:
    """
    First circuit of a seeded family whose reference purifies within T layers
    (at exactly t_p layers when given).
    """
    template = CircuitSpec(L=L, T=T, p=p, circuit_seed=0)
    for seed in circuit_seeds(base_seed, max_tries):
        instance = build_circuit(template.with_seed(seed))
        found = purification_time(instance)
        if found is not None and (t_p is None or found == t_p):
            return instance

    raise RuntimeError(f"No purified circuit at L={L} T={T} p={p} in {max_tries} tries")


def purified_circuits(
    L: int, T: int, p: float, count: int, base_seed: int = 0, max_tries: int = 5000
) -> List[CircuitInstance]:
    """The first `count` circuits of a seeded family that purify within T layers."""
    template = CircuitSpec(L=L, T=T, p=p, circuit_seed=0)
    found = []
    for seed in circuit_seeds(base_seed, max_tries):
        instance = build_circuit(template.with_seed(seed))
        if purification_time(instance) is not None:
            found.append(instance)
            if len(found) == count:
                break
    return found


def unpurified_circuit(L: int = 4, T: int = 3, seed: int = 7) -> CircuitInstance:
    # Without measurements the reference can never purify
    return build_circuit(CircuitSpec(L=L, T=T, p=0.0, circuit_seed=seed))


def synthetic_dataset(
    n: int,
    depth: int = 6,
    width: int = 6,
    seed: int = 0,
    fill: float = 0.5,
) -> Dataset:
    """
    Dataset whose label is written on every measured pixel: images hold the label
    on a random mask and zeros elsewhere, so the label is trivially learnable.
    """
    rng = np.random.default_rng(seed)
    labels = rng.choice(np.array([-1, 1], dtype=np.int8), size=n)
    mask = rng.random((n, depth, width)) < fill
    mask[:, 0, 0] = True
    outcomes = (mask * labels[:, np.newaxis, np.newaxis]).astype(np.int8)
    return Dataset(
        L=width,
        T=depth,
        p=fill,
        circuit_seed=seed,
        axis=Axis.Z,
        window=WindowSpec(width // 2, width, depth),
        outcomes=outcomes,
        labels=labels,
        trajectory_seeds=np.arange(n, dtype=np.uint64),
    )
