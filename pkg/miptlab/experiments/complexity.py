#!/usr/bin/env python
# -*- coding: utf-8 -*-

import logging
from dataclasses import dataclass, replace
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from .. import constants
from ..circuits import CircuitInstance, CircuitSpec, build_circuit, circuit_seeds
from ..exceptions import InsufficientCircuitsError
from ..nn.training import min_training_samples
from ..trajectories import depth_window, lightcone_window, probe_circuit
from ..types import WindowSpec
from ..utils.parallel import parallel_map
from .config import WINDOW_LIGHTCONE, ComplexityConfig

###############################################################################

log = logging.getLogger(__name__)

POSTSELECTION_CHUNK = 64

###############################################################################


@dataclass(frozen=True)
class ComplexityResult:
    """
    Learning complexity of circuits postselected on one purification time.

    Attributes
    ----------
    M_values: Tuple[Optional[int], ...]
        M(ε_l) per circuit in seed order; None where no grid budget reached ε_l.
    mean_M: float
        Mean over circuits that reached the criterion, NaN if none did.
    std_M: float
        Standard deviation across those circuits.
    failure_fraction: float
        Fraction of circuits that never reached the criterion.
    flagged: bool
        failure_fraction exceeds δ_l.
    """

    p: float
    L: int
    t_p: int
    init: str
    window_mode: str
    circuit_seeds: Tuple[int, ...]
    M_values: Tuple[Optional[int], ...]
    mean_M: float
    std_M: float
    failure_fraction: float
    flagged: bool

    @property
    def N_c(self) -> int:
        return len(self.M_values)

    def to_row(self) -> Dict[str, Any]:
        return {
            "p": self.p,
            "L": self.L,
            "t_p": self.t_p,
            "init": self.init,
            "window_mode": self.window_mode,
            "N_c": self.N_c,
            "mean_M": self.mean_M,
            "std_M": self.std_M,
            "failure_fraction": self.failure_fraction,
            "flagged": self.flagged,
        }

    def circuit_rows(self) -> List[Dict[str, Any]]:
        return [
            {
                "p": self.p,
                "L": self.L,
                "t_p": self.t_p,
                "window_mode": self.window_mode,
                "circuit_seed": seed,
                "M": "" if M is None else M,
            }
            for seed, M in zip(self.circuit_seeds, self.M_values)
        ]


def summarize_budgets(values: List[Optional[int]]) -> Tuple[float, float, float]:
    """Mean and standard deviation of reached budgets, and the failing fraction."""
    reached = np.array([M for M in values if M is not None], dtype=np.float64)
    failing = 1.0 - len(reached) / max(1, len(values))
    if len(reached) == 0:
        return float("nan"), float("nan"), failing
    std = float(np.std(reached, ddof=1)) if len(reached) > 1 else 0.0
    return float(np.mean(reached)), std, failing


def postselect_circuits(
    template: CircuitSpec,
    t_p: int,
    count: int,
    base_seed: int = 0,
    generation_cap: int = 1_000_000,
    scheduler: str = "threads",
) -> List[CircuitInstance]:
    """
    Fresh circuits whose probe trajectory purifies at exactly t_p.

    Candidates are drawn in seed order from the family of `base_seed` and the
    first `count` hits are returned.

    Raises
    ------
    InsufficientCircuitsError
        Fewer than `count` hits among the first `generation_cap` candidates.
    """
    hits: List[int] = []
    offset = 0
    while len(hits) < count:
        if offset >= generation_cap:
            raise InsufficientCircuitsError(
                f"Found {len(hits)} of {count} circuits with t_p={t_p} "
                f"(L={template.L}, p={template.p}) in {generation_cap} candidates."
            )
        chunk = min(POSTSELECTION_CHUNK, generation_cap - offset)
        seeds = circuit_seeds(base_seed, chunk, offset=offset)
        times = parallel_map(
            probe_circuit, seeds, scheduler=scheduler, template=template
        )
        hits.extend(seed for seed, time in zip(seeds, times) if time == t_p)
        offset += chunk

    log.debug(f"Postselected {count} circuits at t_p={t_p} from {offset} candidates")
    return [build_circuit(template.with_seed(seed)) for seed in hits[:count]]


def complexity_window(
    instance: CircuitInstance, t_p: int, config: ComplexityConfig
) -> WindowSpec:
    if config.window_mode == WINDOW_LIGHTCONE:
        return lightcone_window(instance, t_p, config.velocity, config.padding)
    return depth_window(instance, t_p)


def _circuit_complexity(
    instance: CircuitInstance, t_p: int, config: ComplexityConfig
) -> Optional[int]:
    return min_training_samples(
        instance,
        epsilon=config.epsilon,
        sample_grid=config.sample_grid,
        window=complexity_window(instance, t_p, config),
        train_config=config.train,
        n_test=config.n_test,
    )


def complexity_at(config: ComplexityConfig, t_p: int) -> ComplexityResult:
    """
    Run the postselected complexity protocol for one purification time.

    Circuits are built with depth T = t_p, so outcomes after purification never
    reach the decoder.
    """
    template = CircuitSpec(
        L=config.L, T=t_p, p=config.p, circuit_seed=0, init=config.init
    )
    circuits = postselect_circuits(
        template,
        t_p,
        config.N_c,
        base_seed=config.base_seed,
        generation_cap=config.generation_cap,
        scheduler=config.scheduler,
    )
    budgets = parallel_map(
        _circuit_complexity,
        circuits,
        scheduler=config.scheduler,
        t_p=t_p,
        config=config,
    )

    mean_M, std_M, failing = summarize_budgets(budgets)
    flagged = failing > config.failure_fraction
    if flagged:
        log.warning(
            f"t_p={t_p}: {failing:.0%} of circuits never reached ε_l={config.epsilon} "
            f"(δ_l={config.failure_fraction:.0%}); M̄ is biased low."
        )

    log.info(f"p={config.p} L={config.L} t_p={t_p}: M̄={mean_M:.1f} ± {std_M:.1f}")
    return ComplexityResult(
        p=config.p,
        L=config.L,
        t_p=t_p,
        init=config.init,
        window_mode=config.window_mode,
        circuit_seeds=tuple(c.circuit_seed for c in circuits),
        M_values=tuple(budgets),
        mean_M=mean_M,
        std_M=std_M,
        failure_fraction=failing,
        flagged=flagged,
    )


def complexity_experiment(config: ComplexityConfig) -> List[ComplexityResult]:
    """
    Averaged number of trajectories needed to learn the reference qubit, per
    postselected purification time.

    Parameters
    ----------
    config: ComplexityConfig
        p, L, the t_p list, N_c circuits per t_p, the window mode and the
        learning protocol.

    Returns
    -------
    results: List[ComplexityResult]
        One result per t_p, in the order given.

    Raises
    ------
    InsufficientCircuitsError
        Postselection hit the generation cap for some t_p.
    """
    return [complexity_at(config, t_p) for t_p in config.t_p]


def scrambled_complexity_experiment(config: ComplexityConfig) -> List[ComplexityResult]:
    """The complexity protocol on circuits whose initial state is scrambled."""
    return complexity_experiment(replace(config, init=constants.INIT_SCRAMBLED))
