#!/usr/bin/env python
# -*- coding: utf-8 -*-

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

from .. import constants
from ..circuits import (
    CircuitInstance,
    CircuitSpec,
    build_circuit,
    circuit_seeds,
    derive_subcircuit,
)
from ..exceptions import CircuitNotDecodableError
from ..nn.model import build_model
from ..nn.training import evaluate, train
from ..trajectories import Dataset, depth_window, generate_dataset, run_trajectory
from ..types import Axis, WindowSpec
from ..utils.parallel import parallel_map
from .config import ScalabilityConfig

###############################################################################

log = logging.getLogger(__name__)

###############################################################################


@dataclass(frozen=True)
class ScalabilityCell:
    """Learned fraction of sub-circuit decoders for one (L_B, t_p) bucket."""

    L: int
    L_B: int
    t_p: int
    n_circuits: int
    n_learned: int

    @property
    def ratio(self) -> float:
        return self.n_learned / self.n_circuits if self.n_circuits else 0.0

    def to_row(self) -> Dict[str, Any]:
        return {
            "L": self.L,
            "L_B": self.L_B,
            "t_p": self.t_p,
            "n_circuits": self.n_circuits,
            "n_learned": self.n_learned,
            "ratio": self.ratio,
        }


def _fit(
    window: WindowSpec,
    training: Dataset,
    test: Dataset,
    config: ScalabilityConfig,
) -> bool:
    model = build_model(window, config.N_t, init_seed=config.train.init_seed)
    train(model, training, config.train)
    return evaluate(model, test, config.epsilon).learned


def strip_learned(
    parent: CircuitInstance,
    axis: Optional[Axis],
    t_p: int,
    parent_test: Dataset,
    L_B: int,
    config: ScalabilityConfig,
) -> bool:
    """
    Train on trajectories of the L_B-site sub-circuit, then test on parent
    trajectories cropped to the same strip and the first t_p layers.

    A sub-circuit that never purifies, or purifies along another axis, cannot
    carry the parent's label and counts as unlearned.
    """
    sub = derive_subcircuit(parent, L_B)

    probe = run_trajectory(sub, 0)
    if probe.t_p is None or probe.axis != axis:
        return False

    window = depth_window(sub, t_p)
    try:
        training = generate_dataset(sub, config.N_t, window=window)
    except CircuitNotDecodableError:
        return False

    # Parent strip columns, in the sub-circuit's site order
    strip = WindowSpec(parent.ref_site, L_B, t_p)
    return _fit(window, training, parent_test.crop(strip), config)


def _circuit_scalability(
    seed: int, template: CircuitSpec, config: ScalabilityConfig
) -> Optional[Tuple[int, Dict[int, bool]]]:
    parent = build_circuit(template.with_seed(seed))
    probe = run_trajectory(parent, 0)
    if probe.t_p is None:
        return None

    t_p = probe.t_p
    window = depth_window(parent, t_p)
    training = generate_dataset(parent, config.N_t, window=window)
    test = generate_dataset(
        parent, config.n_test, seed_offset=constants.TEST_SEED_OFFSET
    )
    if not _fit(window, training, test.crop(window), config):
        log.debug(f"Circuit {seed}: not learnable at full width, skipped")
        return None

    learned = {
        L_B: strip_learned(parent, probe.axis, t_p, test, L_B, config)
        for L_B in config.L_B
    }
    log.debug(f"Circuit {seed}: t_p={t_p} learned={learned}")
    return t_p, learned


def scalability_experiment(config: ScalabilityConfig) -> List[ScalabilityCell]:
    """
    Ratio of circuits whose reference qubit is learned from sub-circuits of
    width L_B, bucketed by purification time.

    Parent circuits are postselected to be learnable from their own outcomes
    (layers up to t_p, all sites). Each decoder is trained on the sub-circuit
    and evaluated on parent trajectories cropped to the strip.

    Raises
    ------
    ConflictingArgumentsError
        Some L_B exceeds L (raised by the config).
    """
    template = CircuitSpec(
        L=config.L, T=config.T, p=config.p, circuit_seed=0, init=config.init
    )
    seeds = circuit_seeds(config.base_seed, config.N_c)
    outcomes = parallel_map(
        _circuit_scalability,
        seeds,
        scheduler=config.scheduler,
        template=template,
        config=config,
    )

    counts: Dict[Tuple[int, int], List[int]] = {}
    for outcome in outcomes:
        if outcome is None:
            continue
        t_p, learned = outcome
        for L_B, flag in learned.items():
            cell = counts.setdefault((L_B, t_p), [0, 0])
            cell[0] += 1
            cell[1] += int(flag)

    cells = [
        ScalabilityCell(config.L, L_B, t_p, n, k)
        for (L_B, t_p), (n, k) in sorted(counts.items())
    ]
    kept = sum(outcome is not None for outcome in outcomes)
    log.info(
        f"Scalability: {kept} of {len(outcomes)} circuits learnable at L={config.L}"
    )
    return cells
