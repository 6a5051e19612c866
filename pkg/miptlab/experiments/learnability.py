#!/usr/bin/env python
# -*- coding: utf-8 -*-

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..circuits import CircuitSpec, build_circuit, circuit_seeds
from ..nn.training import min_training_samples
from ..trajectories import full_window, purification_time
from ..utils.parallel import parallel_map
from .config import LearnabilityConfig

###############################################################################

log = logging.getLogger(__name__)

###############################################################################


@dataclass(frozen=True)
class LearnabilityCurve:
    """
    Fraction of random circuits learned at each training budget, without
    postselection on the purification time.

    Attributes
    ----------
    N_t: Tuple[int, ...]
        Ascending budget grid.
    R_l: Tuple[float, ...]
        Learned fraction at each budget. Non-decreasing.
    R_p_T: float
        Fraction of the same circuits purified by depth T; bounds R_l.
    M_values: Tuple[Optional[int], ...]
        Smallest sufficient budget per circuit, None if never learned.
    """

    p: float
    L: int
    T: int
    N_t: Tuple[int, ...]
    R_l: Tuple[float, ...]
    R_p_T: float
    M_values: Tuple[Optional[int], ...]

    @property
    def N_c(self) -> int:
        return len(self.M_values)

    def rows(self) -> List[Dict[str, Any]]:
        return [
            {
                "p": self.p,
                "L": self.L,
                "T": self.T,
                "N_t": budget,
                "R_l": ratio,
                "R_p_T": self.R_p_T,
                "N_c": self.N_c,
            }
            for budget, ratio in zip(self.N_t, self.R_l)
        ]


def learned_fraction(
    M_values: List[Optional[int]], grid: List[int]
) -> Tuple[float, ...]:
    """
    R_l(N_t): a circuit counts as learned at every budget from its M on.

    Training sets are nested prefixes of one dataset, so the search stops at M
    and larger budgets are never trained.
    """
    reached = np.array(
        [np.inf if M is None else M for M in M_values], dtype=np.float64
    )
    if len(reached) == 0:
        return tuple(0.0 for _ in grid)
    return tuple(float(np.mean(reached <= budget)) for budget in grid)


def _circuit_budget(
    seed: int, template: CircuitSpec, config: LearnabilityConfig
) -> Tuple[bool, Optional[int]]:
    instance = build_circuit(template.with_seed(seed))
    if purification_time(instance) is None:
        return False, None

    budget = min_training_samples(
        instance,
        epsilon=config.epsilon,
        sample_grid=config.N_t,
        window=full_window(instance),
        train_config=config.train,
        n_test=config.n_test,
    )
    log.debug(f"Circuit {seed}: M={budget}")
    return True, budget


def learnability_experiment(config: LearnabilityConfig) -> LearnabilityCurve:
    """
    Ratio of learned circuits R_l(N_t) over N_c fresh circuits of depth T.

    Each circuit is searched once over the whole grid with nested training sets,
    so it is learned at every budget from its smallest sufficient one on. A
    circuit unpurified by T is unlearned at every budget.
    """
    grid = sorted(config.N_t)
    template = CircuitSpec(
        L=config.L, T=config.T, p=config.p, circuit_seed=0, init=config.init
    )
    seeds = circuit_seeds(config.base_seed, config.N_c)
    outcomes = parallel_map(
        _circuit_budget,
        seeds,
        scheduler=config.scheduler,
        template=template,
        config=config,
    )

    purified = [flag for flag, _ in outcomes]
    M_values = [budget for _, budget in outcomes]
    curve = LearnabilityCurve(
        p=config.p,
        L=config.L,
        T=config.T,
        N_t=tuple(grid),
        R_l=learned_fraction(M_values, grid),
        R_p_T=float(np.mean(purified)) if purified else 0.0,
        M_values=tuple(M_values),
    )
    log.info(
        f"p={config.p} L={config.L} T={config.T}: R_l={curve.R_l} "
        f"(R_p(T)={curve.R_p_T:.3f})"
    )
    return curve
