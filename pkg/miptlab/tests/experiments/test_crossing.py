#!/usr/bin/env python
# -*- coding: utf-8 -*-

from typing import List

import numpy as np
import pytest

from miptlab.exceptions import ConflictingArgumentsError
from miptlab.experiments import (
    CoherentInfoSeries,
    crossing_analysis,
    crossing_experiment,
)
from miptlab.experiments.crossing import (
    central_difference_rate,
    crossing_depth,
    decay_time,
    fitted_rate,
)
from miptlab.experiments.config import CrossingConfig

###############################################################################

P_GRID = (0.08, 0.12, 0.2, 0.24)
TAU_D = 0.25
DEPTH = 6

###############################################################################


def scaled_rate(p: float, L: int) -> float:
    # L λ grows with p, faster for larger L, so the curves cross at p = 0.16
    return 2.0 + (p - 0.16) * L


def exponential_series(p: float, L: int, N_c: int = 1000) -> CoherentInfoSeries:
    t = np.arange(DEPTH + 1)
    S = np.exp(-scaled_rate(p, L) / L * t)
    return CoherentInfoSeries(
        p=p,
        L=L,
        T=DEPTH,
        N_c=N_c,
        S_Q=tuple(S.tolist()),
        S_Q_err=tuple(0.0 for _ in t),
    )


def grid(sizes=(8, 16), N_c: int = 1000) -> List[CoherentInfoSeries]:
    return [exponential_series(p, L, N_c) for L in sizes for p in P_GRID]


###############################################################################


@pytest.mark.parametrize(
    "tau_d, L, expected", [(0.25, 8, 2), (0.25, 16, 4), (0.125, 12, 2), (0.01, 8, 1)]
)
def test_decay_time(tau_d: float, L: int, expected: int) -> None:
    assert decay_time(tau_d, L) == expected


@pytest.mark.parametrize("estimator", ["central", "fit"])
def test_scaled_rates_recovered(estimator: str) -> None:
    result = crossing_analysis(grid(), TAU_D, estimator=estimator)

    assert len(result.points) == 8
    for point in result.points:
        assert point.t_d == decay_time(TAU_D, point.L)
        assert point.scaled_rate == pytest.approx(scaled_rate(point.p, point.L))
        assert point.decay_rate == pytest.approx(point.scaled_rate / point.L)

    assert len(result.pair_crossings) == 1
    L_a, L_b, p_cross = result.pair_crossings[0]
    assert (L_a, L_b) == (8, 16)
    assert p_cross == pytest.approx(0.16)
    assert result.interval == (0.12, 0.2)


def test_estimators_agree() -> None:
    central = crossing_analysis(grid(), TAU_D, estimator="central")
    fit = crossing_analysis(grid(), TAU_D, estimator="fit", half_width=2)
    for a, b in zip(central.points, fit.points):
        assert (a.L, a.p) == (b.L, b.p)
        assert a.decay_rate == pytest.approx(b.decay_rate, rel=1e-9)


def test_three_sizes() -> None:
    result = crossing_analysis(grid(sizes=(8, 12, 16)), TAU_D)
    assert [pair[:2] for pair in result.pair_crossings] == [(8, 12), (12, 16)]
    for _, _, p_cross in result.pair_crossings:
        assert p_cross == pytest.approx(0.16)


def test_rate_errors() -> None:
    few = crossing_analysis(grid(N_c=100), TAU_D)
    many = crossing_analysis(grid(N_c=10000), TAU_D)
    for a, b in zip(few.points, many.points):
        assert a.decay_rate_err > b.decay_rate_err > 0.0
        assert a.decay_rate == pytest.approx(b.decay_rate)
    for point in many.points:
        assert point.scaled_rate_err == pytest.approx(point.L * point.decay_rate_err)


def test_vanishing_entropy_excluded() -> None:
    series = grid()
    series[0] = CoherentInfoSeries(
        p=P_GRID[0],
        L=8,
        T=DEPTH,
        N_c=1000,
        S_Q=(1.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0),
        S_Q_err=tuple(0.0 for _ in range(DEPTH + 1)),
    )

    result = crossing_analysis(series, TAU_D)
    assert len(result.points) == 7
    assert (8, P_GRID[0]) not in {(point.L, point.p) for point in result.points}
    assert result.pair_crossings[0][2] == pytest.approx(0.16)


def test_no_crossing() -> None:
    # Above p = 0.16 the L = 16 curve stays on top
    series = [exponential_series(p, 8) for p in (0.2, 0.24)]
    series += [exponential_series(p, 16) for p in (0.2, 0.24)]
    result = crossing_analysis(series, TAU_D)
    assert result.pair_crossings == ()
    assert result.interval is None
    assert result.crossing_rows() == []


@pytest.mark.parametrize(
    "sizes",
    [
        pytest.param(
            (8,), marks=pytest.mark.raises(exception=ConflictingArgumentsError)
        ),
        pytest.param((), marks=pytest.mark.raises(exception=ConflictingArgumentsError)),
    ],
)
def test_needs_two_sizes(sizes) -> None:
    crossing_analysis(grid(sizes=sizes), TAU_D)


def test_learned_curve_missing() -> None:
    with pytest.raises(ValueError):
        exponential_series(0.1, 8).curve("learned")


def test_central_difference_edges() -> None:
    t = np.arange(4)
    S = np.exp(-0.5 * t)
    # One sided at the end of the grid
    rate, error = central_difference_rate(t, S, 3)
    assert rate == pytest.approx(0.5)
    assert error == 0.0
    assert central_difference_rate(t, S, 7) is None
    assert central_difference_rate(np.array([2]), np.array([0.5]), 2) is None


def test_fitted_rate_needs_two_points() -> None:
    t = np.arange(5)
    S = np.array([1.0, 0.5, 0.0, 0.0, 0.0])
    assert fitted_rate(t, S, 4, half_width=1) is None
    rate, _ = fitted_rate(t, S, 1, half_width=1)
    assert rate == pytest.approx(np.log(2))


def test_rows() -> None:
    result = crossing_analysis(grid(), TAU_D)
    rows = result.rows()
    assert len(rows) == 8
    assert set(rows[0]) == {
        "L",
        "p",
        "t_d",
        "lambda",
        "lambda_err",
        "L_lambda",
        "L_lambda_err",
        "tau_d",
        "estimator",
        "source",
    }
    (row,) = result.crossing_rows()
    assert (row["interval_low"], row["interval_high"]) == (0.12, 0.2)


@pytest.mark.parametrize(
    "config, L, expected",
    [
        (CrossingConfig(tau_d=0.25), 8, 3),
        (CrossingConfig(tau_d=0.25, estimator="fit", fit_half_width=3), 8, 5),
        (CrossingConfig(tau_d=0.25, T=10), 8, 10),
    ],
)
def test_crossing_depth(config: CrossingConfig, L: int, expected: int) -> None:
    assert crossing_depth(config, L) == expected


@pytest.mark.slow
def test_crossing_from_simulated_circuits() -> None:
    config = CrossingConfig(
        p=(0.06, 0.16, 0.26),
        L=(16, 32),
        tau_d=0.125,
        N_c=3000,
        scheduler="synchronous",
    )
    result = crossing_experiment(config)

    assert {(point.L, point.p) for point in result.points} == {
        (L, p) for L in config.L for p in config.p
    }
    assert [point.t_d for point in result.points] == [2, 2, 2, 4, 4, 4]

    # Slow decay in the mixed phase, fast in the pure phase
    by_size = {
        L: [point.scaled_rate for point in result.points if point.L == L]
        for L in config.L
    }
    assert by_size[16] == sorted(by_size[16])
    assert by_size[32] == sorted(by_size[32])

    assert result.interval is not None
    low, high = result.interval
    assert low <= 0.21 and high >= 0.11
