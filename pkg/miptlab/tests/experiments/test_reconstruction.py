#!/usr/bin/env python
# -*- coding: utf-8 -*-

from typing import Dict, List

import numpy as np
import pytest

from miptlab.experiments import appendix_b_reconstruction
from miptlab.experiments.reconstruction import (
    interpolate_complexity,
    monotone_complexity,
)

###############################################################################

R_P = [0.2, 0.3, 0.1]
BUDGETS = [250, 500, 1000, 4000]

###############################################################################


def test_step_model() -> None:
    result = appendix_b_reconstruction(R_P, {1: 300, 2: 800, 3: np.inf}, BUDGETS)

    assert result.N_t == tuple(BUDGETS)
    assert result.predicted == pytest.approx((0.0, 0.2, 0.5, 0.5))
    assert result.complexity == pytest.approx((300.0, 800.0, np.inf))
    assert result.R_p_T == pytest.approx(0.6)
    assert not result.corrected
    assert result.measured is None
    assert result.sup_norm is None


def test_step_model_bounded_by_purified_mass() -> None:
    result = appendix_b_reconstruction(R_P, {1: 10, 2: 20, 3: 30}, [1, 10**9])
    assert result.predicted == pytest.approx((0.0, result.R_p_T))


def test_budgets_sorted() -> None:
    result = appendix_b_reconstruction(R_P, {1: 300, 2: 800}, [4000, 250])
    assert result.N_t == (250, 4000)
    # t_p = 3 is extrapolated log-linearly along the last segment
    assert result.complexity[2] == pytest.approx(800 * 800 / 300)
    assert result.predicted == pytest.approx((0.0, 0.6))


def test_measured_comparison() -> None:
    result = appendix_b_reconstruction(
        R_P, {1: 300, 2: 800, 3: np.inf}, BUDGETS, measured=[0.05, 0.2, 0.4, 0.5]
    )
    assert result.sup_norm == pytest.approx(0.1)
    rows = result.rows()
    assert [row["R_l_measured"] for row in rows] == [0.05, 0.2, 0.4, 0.5]
    assert [row["t_p"] for row in result.complexity_rows()] == [1, 2, 3]


def test_non_monotone_table() -> None:
    result = appendix_b_reconstruction(R_P, {1: 500, 2: 300, 3: 1000}, [250, 500, 2000])
    assert result.corrected
    assert result.complexity == pytest.approx((400.0, 400.0, 1000.0))
    assert result.predicted == pytest.approx((0.0, 0.5, 0.6))


@pytest.mark.parametrize(
    "values, expected, corrected",
    [
        ([500, 300, 1000], [400, 400, 1000], True),
        ([100, np.inf, 50], [75, np.inf, np.inf], True),
        ([100, 200, 300], [100, 200, 300], False),
        ([100, 200, np.inf], [100, 200, np.inf], False),
        ([np.inf, np.inf], [np.inf, np.inf], False),
    ],
)
def test_monotone_complexity(
    values: List[float], expected: List[float], corrected: bool
) -> None:
    fixed, was_corrected = monotone_complexity(values)
    np.testing.assert_allclose(fixed, expected)
    assert was_corrected == corrected
    assert np.all(np.diff(fixed[np.isfinite(fixed)]) >= 0)


@pytest.mark.parametrize(
    "table, depth, expected",
    [
        ({1: 100, 3: 400}, 4, [100, 200, 400, 800]),
        ({2: 100, 3: 200}, 3, [100, 100, 200]),
        ({2: 100}, 3, [100, 100, 100]),
        ({1: 100, 2: np.inf}, 3, [100, np.inf, np.inf]),
        ({}, 2, [np.inf, np.inf]),
    ],
)
def test_interpolate_complexity(
    table: Dict[int, float], depth: int, expected: List[float]
) -> None:
    np.testing.assert_allclose(interpolate_complexity(table, depth), expected)


def test_interpolation_keeps_table_entries_exact() -> None:
    table = {1: 50.0, 2: 300.0, 4: 1000.0}
    curve = interpolate_complexity(table, 4)
    assert [curve[0], curve[1], curve[3]] == [50.0, 300.0, 1000.0]

    result = appendix_b_reconstruction([0.5, 0.5], {1: 50.0, 2: 300.0}, [50, 300])
    assert result.predicted == (0.5, 1.0)
