#!/usr/bin/env python
# -*- coding: utf-8 -*-

import logging
from dataclasses import dataclass, replace
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from .. import constants
from ..circuits import CircuitSpec, build_circuit, circuit_seeds
from ..nn.model import build_model
from ..nn.training import evaluate, train
from ..trajectories import depth_window, generate_dataset, run_trajectory
from ..utils.parallel import parallel_map
from .config import CoherentInfoConfig

###############################################################################

log = logging.getLogger(__name__)

###############################################################################


def binomial_error(fraction: np.ndarray, n: int) -> np.ndarray:
    """Standard error of an empirical fraction over n independent draws."""
    fraction = np.asarray(fraction, dtype=np.float64)
    return np.sqrt(np.clip(fraction * (1.0 - fraction), 0.0, None) / max(1, n))


@dataclass(frozen=True)
class CoherentInfoSeries:
    """
    Coherent information of the reference qubit against depth for one (p, L).

    Attributes
    ----------
    S_Q: Tuple[float, ...]
        Exact mean reference entropy at t = 0..T.
    S_Q_err: Tuple[float, ...]
        Binomial standard error of S_Q.
    depths: Tuple[int, ...]
        Depths of the learned estimate, empty when it was not run.
    S_tilde: Tuple[float, ...]
        1 - (fraction of circuits learnable from the first t layers) at each depth.
    S_tilde_err: Tuple[float, ...]
        Binomial standard error of S_tilde.
    """

    p: float
    L: int
    T: int
    N_c: int
    S_Q: Tuple[float, ...]
    S_Q_err: Tuple[float, ...]
    depths: Tuple[int, ...] = ()
    S_tilde: Tuple[float, ...] = ()
    S_tilde_err: Tuple[float, ...] = ()
    N_t: Optional[int] = None

    @property
    def times(self) -> Tuple[int, ...]:
        return tuple(range(self.T + 1))

    def curve(self, source: str = "exact") -> Tuple[np.ndarray, np.ndarray]:
        """(t, S) pairs of the exact or the learned estimate."""
        if source == "exact":
            return np.array(self.times), np.array(self.S_Q)
        if len(self.depths) == 0:
            raise ValueError(
                f"Series p={self.p} L={self.L} carries no learned estimate."
            )
        return np.array(self.depths), np.array(self.S_tilde)

    def rows(self) -> List[Dict[str, Any]]:
        learned = dict(zip(self.depths, zip(self.S_tilde, self.S_tilde_err)))
        rows = []
        for t in self.times:
            S_tilde, S_tilde_err = learned.get(t, ("", ""))
            rows.append(
                {
                    "p": self.p,
                    "L": self.L,
                    "t": t,
                    "N_c": self.N_c,
                    "S_Q": self.S_Q[t],
                    "S_Q_err": self.S_Q_err[t],
                    "S_tilde": S_tilde,
                    "S_tilde_err": S_tilde_err,
                }
            )
        return rows


def learned_at_depths(
    seed: int,
    template: CircuitSpec,
    config: CoherentInfoConfig,
    depths: Tuple[int, ...],
) -> Tuple[np.ndarray, Tuple[bool, ...]]:
    """
    Reference entropy trace of one circuit and, per depth t, whether the
    network decodes its label from the first t layers at budget N_t.

    One dataset of full outcome matrices is cropped to every depth. Depths
    before purification count as unlearned.
    """
    instance = build_circuit(template.with_seed(seed))
    record = run_trajectory(instance, 0)
    if not config.learned:
        return record.ref_entropy, ()
    if record.t_p is None:
        return record.ref_entropy, tuple(False for _ in depths)

    training = generate_dataset(instance, config.N_t)
    test = generate_dataset(
        instance, config.n_test, seed_offset=constants.TEST_SEED_OFFSET
    )

    learned = []
    for depth in depths:
        if depth < record.t_p:
            learned.append(False)
            continue
        window = depth_window(instance, depth)
        model = build_model(window, config.N_t, init_seed=config.train.init_seed)
        train(model, training.crop(window), config.train)
        learned.append(evaluate(model, test.crop(window), config.epsilon).learned)

    log.debug(f"Circuit {seed}: t_p={record.t_p} learned={learned}")
    return record.ref_entropy, tuple(learned)


def coherent_info_series(
    config: CoherentInfoConfig, p: float, L: int
) -> CoherentInfoSeries:
    depths = tuple(config.depths or range(1, config.T + 1))
    template = CircuitSpec(L=L, T=config.T, p=p, circuit_seed=0, init=config.init)
    seeds = circuit_seeds(config.base_seed, config.N_c)
    traces = parallel_map(
        learned_at_depths,
        seeds,
        scheduler=config.scheduler,
        template=template,
        config=config,
        depths=depths,
    )

    entropy = np.stack([trace for trace, _ in traces]).astype(np.float64)
    S_Q = entropy.mean(axis=0)
    series = CoherentInfoSeries(
        p=p,
        L=L,
        T=config.T,
        N_c=config.N_c,
        S_Q=tuple(float(s) for s in S_Q),
        S_Q_err=tuple(float(e) for e in binomial_error(S_Q, config.N_c)),
    )
    if not config.learned:
        return series

    learned = np.array([flags for _, flags in traces], dtype=np.float64)
    S_tilde = 1.0 - learned.mean(axis=0)
    return replace(
        series,
        depths=depths,
        S_tilde=tuple(float(s) for s in S_tilde),
        S_tilde_err=tuple(float(e) for e in binomial_error(S_tilde, config.N_c)),
        N_t=config.N_t,
    )


def coherent_info_experiment(config: CoherentInfoConfig) -> List[CoherentInfoSeries]:
    """
    Coherent information dynamics S_Q(t) for every (p, L), exact and optionally
    learned.

    Parameters
    ----------
    config: CoherentInfoConfig
        p and L lists, depth T, N_c circuits per cell and the frozen budget N_t
        of the learned estimate.

    Returns
    -------
    series: List[CoherentInfoSeries]
        One series per (L, p), sizes outermost.
    """
    series = []
    for L in config.L:
        for p in config.p:
            series.append(coherent_info_series(config, p, L))
            log.info(f"p={p} L={L}: S_Q(T)={series[-1].S_Q[-1]:.3f}")
    return series
