#!/usr/bin/env python
# -*- coding: utf-8 -*-

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import isotonic_regression

from ..exceptions import InsufficientCircuitsError
from ..trajectories import purification_histogram
from .complexity import complexity_at
from .config import (
    WINDOW_WHOLE,
    AppendixBConfig,
    ComplexityConfig,
    LearnabilityConfig,
)
from .learnability import learnability_experiment

###############################################################################

log = logging.getLogger(__name__)

###############################################################################


@dataclass(frozen=True)
class ReconstructionResult:
    """
    Step-model prediction of the learnability curve.

    Attributes
    ----------
    N_t: Tuple[int, ...]
        Budget grid.
    predicted: Tuple[float, ...]
        Σ r_p(t_p) over purification times whose M̄(t_p) is within the budget.
    measured: Optional[Tuple[float, ...]]
        Measured R_l on the same grid, when supplied.
    sup_norm: Optional[float]
        max |predicted - measured|.
    complexity: Tuple[float, ...]
        M̄(t) for t = 1..T after monotone correction and interpolation.
    corrected: bool
        The M̄ table was not monotone and was isotonically corrected.
    R_p_T: float
        Purified mass Σ r_p; the prediction at an unbounded budget.
    """

    N_t: Tuple[int, ...]
    predicted: Tuple[float, ...]
    measured: Optional[Tuple[float, ...]]
    sup_norm: Optional[float]
    complexity: Tuple[float, ...]
    corrected: bool
    R_p_T: float

    def rows(self) -> List[Dict[str, Any]]:
        measured = self.measured or tuple("" for _ in self.N_t)
        return [
            {"N_t": budget, "R_l_predicted": predicted, "R_l_measured": value}
            for budget, predicted, value in zip(self.N_t, self.predicted, measured)
        ]

    def complexity_rows(self) -> List[Dict[str, Any]]:
        return [
            {"t_p": t, "M": M} for t, M in enumerate(self.complexity, start=1)
        ]


def monotone_complexity(values: Sequence[float]) -> Tuple[np.ndarray, bool]:
    """
    Non-decreasing version of an M̄ table.

    Finite entries are fit by isotonic regression; missing (infinite) entries
    stay infinite and everything after them is raised to match.
    """
    M = np.asarray(values, dtype=np.float64)
    fixed = M.copy()
    finite = np.isfinite(M)
    if finite.sum() > 1:
        fixed[finite] = isotonic_regression(M[finite], increasing=True).x
    fixed = np.maximum.accumulate(fixed)

    both = np.isfinite(fixed) & finite
    corrected = bool(
        np.any(~np.isclose(fixed[both], M[both])) or np.any(np.isinf(fixed) & finite)
    )
    return fixed, corrected


def interpolate_complexity(table: Mapping[int, float], depth: int) -> np.ndarray:
    """
    M̄(t) for t = 1..depth from a sparse table: log-linear between entries,
    extrapolated along the last segment, clamped below the first entry.
    """
    keys = sorted(table)
    if not keys:
        return np.full(depth, np.inf)

    known = np.array(keys, dtype=np.float64)
    values = np.array([table[k] for k in keys], dtype=np.float64)
    t = np.arange(1, depth + 1, dtype=np.float64)
    out = np.full(depth, np.inf)

    finite = np.isfinite(values)
    if not finite.any():
        return out

    # Everything at or after the first unreachable entry stays unreachable
    stop = known[~finite][0] if (~finite).any() else np.inf
    known, log_values = known[finite], np.log(values[finite])
    reachable = t < stop

    interior = np.interp(t, known, log_values)
    if len(known) > 1:
        slope = (log_values[-1] - log_values[-2]) / (known[-1] - known[-2])
        beyond = t > known[-1]
        interior[beyond] = log_values[-1] + slope * (t[beyond] - known[-1])

    out[reachable] = np.exp(interior[reachable])
    # Table entries come back exactly, so a budget equal to M̄ still counts
    for key, value in zip(known, values[finite]):
        if 1 <= key <= depth and key < stop:
            out[int(key) - 1] = value
    return out


def appendix_b_reconstruction(
    r_p: Sequence[float],
    complexity: Mapping[int, float],
    N_t: Sequence[int],
    measured: Optional[Sequence[float]] = None,
) -> ReconstructionResult:
    """
    Predict R_l(N_t) = Σ_{t_p} r_p(t_p) [M̄(t_p) <= N_t] under the step model.

    Parameters
    ----------
    r_p: Sequence[float]
        Purification time masses for t_p = 1..T, without the unpurified mass.
    complexity: Mapping[int, float]
        M̄ by purification time; missing or infinite entries are unreachable.
    N_t: Sequence[int]
        Budget grid.
    measured: Optional[Sequence[float]]
        Measured R_l on the ascending budget grid, for the sup-norm comparison.

    Returns
    -------
    result: ReconstructionResult
        The predicted curve and, when measured values are given, the distance.
    """
    masses = np.asarray(r_p, dtype=np.float64)
    depth = len(masses)

    keys = sorted(complexity)
    fixed, corrected = monotone_complexity([complexity[k] for k in keys])
    if corrected:
        log.warning(
            f"M̄ table {[complexity[k] for k in keys]} is not monotone in t_p; "
            f"using the isotonic fit {fixed.tolist()}."
        )

    curve = interpolate_complexity(dict(zip(keys, fixed)), depth)
    grid = sorted(N_t)
    predicted = tuple(float(np.sum(masses[curve <= budget])) for budget in grid)

    sup_norm = None
    measured_tuple = None
    if measured is not None:
        measured_tuple = tuple(float(m) for m in measured)
        sup_norm = float(np.max(np.abs(np.array(predicted) - measured_tuple)))
        log.info(f"Step model vs measured R_l: sup-norm {sup_norm:.3f}")

    return ReconstructionResult(
        N_t=tuple(grid),
        predicted=predicted,
        measured=measured_tuple,
        sup_norm=sup_norm,
        complexity=tuple(float(m) for m in curve),
        corrected=corrected,
        R_p_T=float(np.sum(masses)),
    )


def appendix_b_experiment(config: AppendixBConfig) -> ReconstructionResult:
    """
    Measure r_p and M̄(t_p), reconstruct R_l(N_t) and compare it with a measured
    learnability curve when `compare` is set.
    """
    masses = purification_histogram(
        config.L,
        config.T,
        config.p,
        config.N_c_hist,
        base_seed=config.base_seed,
        init=config.init,
        scheduler=config.scheduler,
    )

    complexity_config = ComplexityConfig(
        p=config.p,
        L=config.L,
        t_p=config.t_p,
        N_c=config.N_c,
        window_mode=WINDOW_WHOLE,
        init=config.init,
        base_seed=config.base_seed,
        epsilon=config.epsilon,
        sample_grid=config.N_t,
        n_test=config.n_test,
        generation_cap=config.generation_cap,
        train=config.train,
        scheduler=config.scheduler,
    )
    table: Dict[int, float] = {}
    for t_p in config.t_p:
        try:
            result = complexity_at(complexity_config, t_p)
        except InsufficientCircuitsError as error:
            log.warning(f"{error} Treating t_p={t_p} as unreachable.")
            table[t_p] = np.inf
            continue
        table[t_p] = np.inf if np.isnan(result.mean_M) else result.mean_M

    measured = None
    if config.compare:
        curve = learnability_experiment(
            LearnabilityConfig(
                p=config.p,
                L=config.L,
                T=config.T,
                N_t=config.N_t,
                N_c=config.N_c_compare,
                init=config.init,
                base_seed=config.base_seed,
                epsilon=config.epsilon,
                n_test=config.n_test,
                train=config.train,
                scheduler=config.scheduler,
            )
        )
        measured = curve.R_l

    return appendix_b_reconstruction(masses[:-1], table, config.N_t, measured)
