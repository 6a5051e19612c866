#!/usr/bin/env python
# -*- coding: utf-8 -*-

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..exceptions import ConflictingArgumentsError
from .coherent_info import CoherentInfoSeries, coherent_info_series
from .config import (
    ESTIMATOR_CENTRAL,
    ESTIMATOR_FIT,
    SOURCE_EXACT,
    SOURCE_LEARNED,
    CoherentInfoConfig,
    CrossingConfig,
)

###############################################################################

log = logging.getLogger(__name__)

###############################################################################


@dataclass(frozen=True)
class DecayPoint:
    """Decay rate λ of ln S_Q at t_d for one (L, p), and the scaled rate L λ."""

    L: int
    p: float
    t_d: int
    decay_rate: float
    decay_rate_err: float
    scaled_rate: float
    scaled_rate_err: float

    def to_row(self) -> Dict[str, Any]:
        return {
            "L": self.L,
            "p": self.p,
            "t_d": self.t_d,
            "lambda": self.decay_rate,
            "lambda_err": self.decay_rate_err,
            "L_lambda": self.scaled_rate,
            "L_lambda_err": self.scaled_rate_err,
        }


@dataclass(frozen=True)
class CrossingResult:
    """
    Scaled decay rates and where their ordering in L inverts.

    Attributes
    ----------
    points: Tuple[DecayPoint, ...]
        One point per (L, p) with usable data, sizes outermost.
    pair_crossings: Tuple[Tuple[int, int, float], ...]
        (L_a, L_b, p*) for each pair of adjacent sizes whose curves cross, p*
        linearly interpolated.
    interval: Optional[Tuple[float, float]]
        Smallest p range holding every bracketing pair of grid points, None if
        no pair of curves crosses.
    """

    tau_d: float
    estimator: str
    source: str
    points: Tuple[DecayPoint, ...]
    pair_crossings: Tuple[Tuple[int, int, float], ...]
    interval: Optional[Tuple[float, float]]

    def rows(self) -> List[Dict[str, Any]]:
        rows = []
        for point in self.points:
            row = point.to_row()
            row.update(tau_d=self.tau_d, estimator=self.estimator, source=self.source)
            rows.append(row)
        return rows

    def crossing_rows(self) -> List[Dict[str, Any]]:
        low, high = self.interval if self.interval is not None else ("", "")
        return [
            {
                "L_a": L_a,
                "L_b": L_b,
                "p_cross": p_cross,
                "interval_low": low,
                "interval_high": high,
            }
            for L_a, L_b, p_cross in self.pair_crossings
        ]


###############################################################################


def decay_time(tau_d: float, L: int) -> int:
    """t_d = τ_d L rounded to the nearest layer, at least one."""
    return max(1, int(round(tau_d * L)))


def _log_error(S: np.ndarray, n_samples: Optional[int]) -> np.ndarray:
    # Binomial error of S propagated to ln S
    if n_samples is None:
        return np.zeros_like(S)
    return np.sqrt((1.0 - S) / (S * n_samples))


def central_difference_rate(
    t: np.ndarray,
    S: np.ndarray,
    t_d: int,
    n_samples: Optional[int] = None,
) -> Optional[Tuple[float, float]]:
    """
    λ = |d ln S / dt| at t_d from the nearest grid neighbours: central where
    both exist, one-sided at the ends of the grid.

    Returns None when t_d is off the grid or S vanishes at a point the stencil
    needs.
    """
    t = np.asarray(t)
    S = np.asarray(S, dtype=np.float64)
    index = np.flatnonzero(t == t_d)
    if len(index) == 0:
        return None

    i = int(index[0])
    low, high = max(0, i - 1), min(len(t) - 1, i + 1)
    if low == high:
        return None
    if S[low] <= 0 or S[high] <= 0:
        return None

    dt = float(t[high] - t[low])
    rate = abs(float(np.log(S[high]) - np.log(S[low]))) / dt
    errors = _log_error(S[[low, high]], n_samples)
    return rate, float(np.hypot(*errors)) / dt


def fitted_rate(
    t: np.ndarray,
    S: np.ndarray,
    t_d: int,
    n_samples: Optional[int] = None,
    half_width: int = 2,
) -> Optional[Tuple[float, float]]:
    """
    λ from a weighted least-squares line through ln S over t_d ± half_width.

    Points with S = 0 are dropped; at least two must remain.
    """
    t = np.asarray(t, dtype=np.float64)
    S = np.asarray(S, dtype=np.float64)
    keep = (np.abs(t - t_d) <= half_width) & (S > 0)
    if keep.sum() < 2:
        return None

    t_fit, S_fit = t[keep], S[keep]
    y = np.log(S_fit)
    sigma = _log_error(S_fit, n_samples)
    weighted = n_samples is not None and bool(np.all(sigma > 0))
    weights = 1.0 / sigma**2 if weighted else np.ones_like(y)

    design = np.stack([t_fit, np.ones_like(t_fit)], axis=1)
    scaled = design * np.sqrt(weights)[:, np.newaxis]
    (slope, _), *_ = np.linalg.lstsq(scaled, y * np.sqrt(weights), rcond=None)

    error = 0.0
    if weighted:
        covariance = np.linalg.pinv(scaled.T @ scaled)
        error = float(np.sqrt(max(covariance[0, 0], 0.0)))
    return abs(float(slope)), error


def estimate_decay_rate(
    series: CoherentInfoSeries,
    tau_d: float,
    estimator: str = ESTIMATOR_CENTRAL,
    source: str = SOURCE_EXACT,
    half_width: int = 2,
) -> Optional[DecayPoint]:
    """Decay point of one series, None (with a warning) when S_Q vanishes."""
    t, S = series.curve(source)
    t_d = decay_time(tau_d, series.L)
    if estimator == ESTIMATOR_FIT:
        estimate = fitted_rate(t, S, t_d, series.N_c, half_width)
    else:
        estimate = central_difference_rate(t, S, t_d, series.N_c)

    if estimate is None:
        log.warning(
            f"Excluded L={series.L} p={series.p}: S_Q vanishes or t_d={t_d} lies "
            f"outside the sampled depths."
        )
        return None

    rate, error = estimate
    return DecayPoint(
        L=series.L,
        p=series.p,
        t_d=t_d,
        decay_rate=rate,
        decay_rate_err=error,
        scaled_rate=series.L * rate,
        scaled_rate_err=series.L * error,
    )


def _pair_crossing(
    a: Dict[float, float], b: Dict[float, float]
) -> Optional[Tuple[float, float, float]]:
    shared = sorted(set(a) & set(b))
    diff = np.array([b[p] - a[p] for p in shared])
    for i in range(len(shared) - 1):
        if diff[i] == 0:
            return shared[i], shared[i], shared[i]
        if np.sign(diff[i]) != np.sign(diff[i + 1]) and diff[i + 1] != 0:
            p0, p1 = shared[i], shared[i + 1]
            root = p0 - diff[i] * (p1 - p0) / (diff[i + 1] - diff[i])
            return p0, p1, float(root)
    if len(shared) and diff[-1] == 0:
        return shared[-1], shared[-1], shared[-1]
    return None


def crossing_analysis(
    series: Sequence[CoherentInfoSeries],
    tau_d: float,
    estimator: str = ESTIMATOR_CENTRAL,
    source: str = SOURCE_EXACT,
    half_width: int = 2,
) -> CrossingResult:
    """
    Locate the crossing of the L λ curves at fixed scaled time τ_d = t_d / L.

    Parameters
    ----------
    series: Sequence[CoherentInfoSeries]
        Coherent information series over a grid of p for two or more sizes.
    tau_d: float
        Scaled decay time; t_d = round(τ_d L).
    estimator: str
        "central" difference of ln S_Q, or a least-squares "fit" over
        t_d ± half_width.
        Default: "central"
    source: str
        Use the "exact" S_Q or the "learned" estimate.
        Default: "exact"
    half_width: int
        Half width in layers of the fit window.
        Default: 2

    Returns
    -------
    result: CrossingResult
        Per-(L, p) decay rates and the crossing interval.

    Raises
    ------
    ConflictingArgumentsError
        Fewer than two system sizes.
    """
    sizes = sorted({s.L for s in series})
    if len(sizes) < 2:
        raise ConflictingArgumentsError(
            f"Crossing analysis needs at least 2 system sizes (received {sizes})."
        )

    points = []
    for L in sizes:
        for s in sorted((s for s in series if s.L == L), key=lambda s: s.p):
            point = estimate_decay_rate(s, tau_d, estimator, source, half_width)
            if point is not None:
                points.append(point)

    curves = {
        L: {point.p: point.scaled_rate for point in points if point.L == L}
        for L in sizes
    }
    brackets = []
    crossings = []
    for L_a, L_b in zip(sizes[:-1], sizes[1:]):
        found = _pair_crossing(curves[L_a], curves[L_b])
        if found is None:
            log.warning(f"L λ curves of L={L_a} and L={L_b} do not cross.")
            continue
        p0, p1, root = found
        brackets.append((p0, p1))
        crossings.append((L_a, L_b, root))

    interval = None
    if brackets:
        interval = (min(b[0] for b in brackets), max(b[1] for b in brackets))
        log.info(f"Crossing interval for p_c: [{interval[0]}, {interval[1]}]")

    return CrossingResult(
        tau_d=tau_d,
        estimator=estimator,
        source=source,
        points=tuple(points),
        pair_crossings=tuple(crossings),
        interval=interval,
    )


def crossing_depth(config: CrossingConfig, L: int) -> int:
    """Depth covering the derivative stencil around t_d."""
    if config.T is not None:
        return config.T
    reach = config.fit_half_width if config.estimator == ESTIMATOR_FIT else 1
    return decay_time(config.tau_d, L) + max(1, reach)


def crossing_experiment(config: CrossingConfig) -> CrossingResult:
    """Run the coherent information series for every (L, p) and analyze them."""
    series = []
    for L in config.L:
        depth = crossing_depth(config, L)
        cell = CoherentInfoConfig(
            p=config.p,
            L=(L,),
            T=depth,
            N_c=config.N_c,
            learned=config.source == SOURCE_LEARNED,
            N_t=config.N_t,
            init=config.init,
            base_seed=config.base_seed,
            epsilon=config.epsilon,
            n_test=config.n_test,
            train=config.train,
            scheduler=config.scheduler,
        )
        for p in config.p:
            series.append(coherent_info_series(cell, p, L))

    return crossing_analysis(
        series,
        config.tau_d,
        estimator=config.estimator,
        source=config.source,
        half_width=config.fit_half_width,
    )
