#!/usr/bin/env python
# -*- coding: utf-8 -*-

import logging
from typing import Any, Dict, List

from ..trajectories import purification_histogram
from .config import HistogramConfig

###############################################################################

log = logging.getLogger(__name__)

###############################################################################


def purification_hist_experiment(config: HistogramConfig) -> List[Dict[str, Any]]:
    """
    Rows of the purification time distribution r_p: one per t_p = 1..T and a
    final "unpurified" row.
    """
    masses = purification_histogram(
        config.L,
        config.T,
        config.p,
        config.N_c,
        base_seed=config.base_seed,
        init=config.init,
        scheduler=config.scheduler,
    )
    labels: List[Any] = list(range(1, config.T + 1)) + ["unpurified"]
    log.info(f"p={config.p} L={config.L}: R_p(T)={1.0 - masses[-1]:.3f}")
    return [
        {"p": config.p, "L": config.L, "T": config.T, "t_p": label, "r_p": mass}
        for label, mass in zip(labels, masses.tolist())
    ]
