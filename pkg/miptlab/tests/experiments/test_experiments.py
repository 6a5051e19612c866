#!/usr/bin/env python
# -*- coding: utf-8 -*-

import math
from typing import List, Optional

import numpy as np
import pytest

from miptlab.circuits import CircuitSpec, build_circuit, circuit_seeds
from miptlab.exact_decoder import analyze_circuit
from miptlab.exceptions import InsufficientCircuitsError
from miptlab.experiments import (
    AppendixBConfig,
    CoherentInfoConfig,
    ComplexityConfig,
    HistogramConfig,
    LearnabilityConfig,
    ScalabilityCell,
    ScalabilityConfig,
    appendix_b_experiment,
    coherent_info_experiment,
    complexity_experiment,
    learnability_experiment,
    purification_hist_experiment,
    scalability_experiment,
    scrambled_complexity_experiment,
)
from miptlab.experiments.coherent_info import binomial_error
from miptlab.experiments.complexity import (
    complexity_at,
    postselect_circuits,
    summarize_budgets,
)
from miptlab.experiments.learnability import learned_fraction
from miptlab.nn.training import TrainConfig
from miptlab.trajectories import purification_time

from ..conftest import SYNC

###############################################################################

QUICK = TrainConfig(max_epochs=20, patience=4)

###############################################################################


def single_key_family(L: int, T: int, p: float, tries: int = 200) -> int:
    """Base seed whose first circuit purifies through a single key measurement."""
    template = CircuitSpec(L=L, T=T, p=p, circuit_seed=0)
    for base_seed in range(tries):
        instance = build_circuit(template.with_seed(circuit_seeds(base_seed, 1)[0]))
        if purification_time(instance) is None:
            continue
        if len(analyze_circuit(instance).key_set) == 1:
            return base_seed

    raise RuntimeError(f"No single key circuit at L={L} T={T} p={p}")


###############################################################################


def test_histogram_rows() -> None:
    rows = purification_hist_experiment(
        HistogramConfig(L=4, T=3, p=1.0, N_c=5, scheduler=SYNC)
    )
    assert [row["t_p"] for row in rows] == [1, 2, 3, "unpurified"]
    assert [row["r_p"] for row in rows] == [1.0, 0.0, 0.0, 0.0]
    assert all(row["L"] == 4 and row["p"] == 1.0 for row in rows)


@pytest.mark.parametrize(
    "values, mean, std, failing",
    [
        ([100, None, 300], 200.0, 141.42135623730951, 1 / 3),
        ([250], 250.0, 0.0, 0.0),
        ([None, None], math.nan, math.nan, 1.0),
        ([], math.nan, math.nan, 1.0),
    ],
)
def test_summarize_budgets(
    values: List[Optional[int]], mean: float, std: float, failing: float
) -> None:
    result = summarize_budgets(values)
    assert result == pytest.approx((mean, std, failing), nan_ok=True)


def test_postselect_circuits() -> None:
    template = CircuitSpec(L=4, T=1, p=1.0, circuit_seed=0)
    circuits = postselect_circuits(template, 1, 3, base_seed=5, scheduler=SYNC)
    assert [c.circuit_seed for c in circuits] == circuit_seeds(5, 3)
    assert all(c.depth == 1 for c in circuits)


@pytest.mark.parametrize(
    "p, t_p",
    [
        pytest.param(
            0.0, 1, marks=pytest.mark.raises(exception=InsufficientCircuitsError)
        ),
        pytest.param(
            1.0, 2, marks=pytest.mark.raises(exception=InsufficientCircuitsError)
        ),
    ],
)
def test_postselection_cap(p: float, t_p: int) -> None:
    template = CircuitSpec(L=4, T=2, p=p, circuit_seed=0)
    postselect_circuits(template, t_p, 2, generation_cap=10, scheduler=SYNC)


@pytest.mark.parametrize("window_mode", ["lightcone", "whole"])
def test_complexity_at(window_mode: str) -> None:
    config = ComplexityConfig(
        p=1.0,
        L=4,
        t_p=(1,),
        N_c=2,
        window_mode=window_mode,
        sample_grid=(50, 100),
        n_test=100,
        train=QUICK,
        scheduler=SYNC,
    )
    result = complexity_at(config, 1)

    assert result.N_c == 2
    assert result.circuit_seeds == tuple(circuit_seeds(0, 2))
    assert all(M in (None, 50, 100) for M in result.M_values)
    failing = sum(M is None for M in result.M_values) / 2
    assert result.failure_fraction == failing
    assert result.flagged == (failing > config.failure_fraction)
    assert len(result.circuit_rows()) == 2
    assert result.to_row()["window_mode"] == window_mode


def test_scrambled_complexity() -> None:
    config = ComplexityConfig(
        p=1.0,
        L=4,
        t_p=(1,),
        N_c=1,
        sample_grid=(50,),
        n_test=50,
        train=QUICK,
        scheduler=SYNC,
    )
    (result,) = scrambled_complexity_experiment(config)
    assert result.init == "scrambled"
    assert result.t_p == 1


@pytest.mark.parametrize(
    "M_values, grid, expected",
    [
        ([250, None, 1000], [250, 500, 1000], (1 / 3, 1 / 3, 2 / 3)),
        ([None], [100], (0.0,)),
        ([], [100, 200], (0.0, 0.0)),
    ],
)
def test_learned_fraction(
    M_values: List[Optional[int]], grid: List[int], expected: tuple
) -> None:
    fractions = learned_fraction(M_values, grid)
    assert fractions == pytest.approx(expected)
    assert list(fractions) == sorted(fractions)


def test_learnability_without_measurements() -> None:
    curve = learnability_experiment(
        LearnabilityConfig(p=0.0, L=4, T=3, N_t=(200, 100), N_c=4, scheduler=SYNC)
    )
    assert curve.N_t == (100, 200)
    assert curve.R_l == (0.0, 0.0)
    assert curve.R_p_T == 0.0
    assert curve.M_values == (None,) * 4
    assert [row["N_t"] for row in curve.rows()] == [100, 200]


def test_binomial_error() -> None:
    errors = binomial_error(np.array([0.5, 0.0, 1.0]), 100)
    np.testing.assert_allclose(errors, [0.05, 0.0, 0.0])
    assert binomial_error(np.array([0.5]), 0)[0] == pytest.approx(0.5)


def test_coherent_info_extremes() -> None:
    config = CoherentInfoConfig(p=(0.0, 1.0), L=(4,), T=3, N_c=5, scheduler=SYNC)
    unmeasured, measured = coherent_info_experiment(config)

    assert unmeasured.S_Q == (1.0, 1.0, 1.0, 1.0)
    assert measured.S_Q == (1.0, 0.0, 0.0, 0.0)
    assert unmeasured.S_Q_err == (0.0,) * 4
    assert unmeasured.depths == ()
    assert [row["t"] for row in measured.rows()] == [0, 1, 2, 3]
    assert measured.rows()[0]["S_tilde"] == ""


def test_coherent_info_order() -> None:
    config = CoherentInfoConfig(p=(0.0, 1.0), L=(4, 6), T=2, N_c=2, scheduler=SYNC)
    series = coherent_info_experiment(config)
    assert [(s.L, s.p) for s in series] == [(4, 0.0), (4, 1.0), (6, 0.0), (6, 1.0)]


def test_learned_estimate_unpurified() -> None:
    config = CoherentInfoConfig(
        p=(0.0,), L=(4,), T=3, N_c=3, learned=True, depths=(1, 3), scheduler=SYNC
    )
    (series,) = coherent_info_experiment(config)
    assert series.depths == (1, 3)
    assert series.S_tilde == (1.0, 1.0)
    assert series.N_t == config.N_t

    t, S = series.curve("learned")
    assert t.tolist() == [1, 3]
    assert series.rows()[1]["S_tilde"] == 1.0
    assert series.rows()[2]["S_tilde"] == ""


@pytest.mark.parametrize(
    "n_circuits, n_learned, ratio", [(4, 3, 0.75), (0, 0, 0.0), (2, 2, 1.0)]
)
def test_scalability_cell(n_circuits: int, n_learned: int, ratio: float) -> None:
    cell = ScalabilityCell(16, 8, 2, n_circuits, n_learned)
    assert cell.ratio == ratio
    assert cell.to_row()["ratio"] == ratio


def test_scalability_without_purification() -> None:
    config = ScalabilityConfig(L=8, L_B=(4, 8), p=0.0, T=3, N_c=3, scheduler=SYNC)
    assert scalability_experiment(config) == []


###############################################################################


def test_learnability_follows_purification() -> None:
    train = TrainConfig(max_epochs=60, patience=10)
    common = dict(L=4, T=2, N_t=(200, 400), N_c=1, n_test=200, scheduler=SYNC)
    purified = learnability_experiment(
        LearnabilityConfig(
            p=0.5, base_seed=single_key_family(4, 2, 0.5), train=train, **common
        )
    )
    unpurified = learnability_experiment(
        LearnabilityConfig(p=0.0, train=train, **common)
    )

    assert purified.R_p_T == 1.0
    assert purified.R_l[-1] == 1.0
    assert unpurified.R_p_T == 0.0
    assert unpurified.R_l == (0.0, 0.0)
    for curve in (purified, unpurified):
        assert list(curve.R_l) == sorted(curve.R_l)
        assert all(ratio <= curve.R_p_T for ratio in curve.R_l)


@pytest.mark.parametrize("p", [0.0, 1.0])
def test_step_model_matches_measured_learnability(p: float) -> None:
    # One circuit of depth one: the complexity and learnability runs train on
    # the same circuit with the same budgets
    config = AppendixBConfig(
        p=p,
        L=4,
        T=1,
        N_c_hist=5,
        t_p=(1,),
        N_c=1,
        N_t=(50, 100, 200),
        N_c_compare=1,
        n_test=100,
        generation_cap=10,
        train=QUICK,
        scheduler=SYNC,
    )
    result = appendix_b_experiment(config)

    assert result.R_p_T == p
    assert result.measured is not None
    assert result.predicted == result.measured
    assert result.sup_norm == 0.0


@pytest.mark.slow
def test_complexity_grows_with_purification_time() -> None:
    config = ComplexityConfig(
        p=0.3,
        L=4,
        t_p=(1, 4),
        N_c=3,
        window_mode="whole",
        sample_grid=(100, 1600),
        n_test=200,
        train=QUICK,
        scheduler=SYNC,
    )
    early, late = complexity_experiment(config)
    assert (early.t_p, late.t_p) == (1, 4)

    def median_budget(result) -> float:
        return float(
            np.median([np.inf if M is None else M for M in result.M_values])
        )

    assert median_budget(late) >= median_budget(early)
