import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oscspline.bspline import eval_N, eval_N_deriv


@pytest.mark.parametrize(
    "m, t, expected",
    [
        (1, 0.5, 1.0),
        (3, -1.0, 0.0),
        (3, 1.5, 0.75),
        (3, 0.5, 0.125),
    ],
)
def test_eval_N_examples(m, t, expected):
    assert eval_N(m, t) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("m, t, expected", [(3, 1.5, 0.0), (3, 0.5, 0.5), (2, -3.0, 0.0)])
def test_eval_N_deriv_examples(m, t, expected):
    assert eval_N_deriv(m, t) == pytest.approx(expected, abs=1e-15)


def test_rejects_bad_orders():
    with pytest.raises(ValueError):
        eval_N(0, 0.5)
    with pytest.raises(ValueError):
        eval_N_deriv(1, 0.5)


def test_base_case_is_left_open_right_closed():
    assert eval_N(1, 0.0) == 0.0
    assert eval_N(1, 1.0) == 1.0
    assert eval_N(1, 1.0 + 1e-15) == 0.0


def test_closed_form_cubic_piece():
    # N_4 on [0, 1] is t^3 / 6
    t = np.linspace(0.01, 0.99, 17)
    np.testing.assert_allclose(eval_N(4, t), t**3 / 6, atol=1e-15)


@given(st.one_of(st.just(0.0), st.floats(1e-9, 1.0, exclude_max=True)), st.integers(1, 6))
def test_partition_of_unity(t, m):
    total = sum(eval_N(m, t + k) for k in range(m + 1))
    assert total == pytest.approx(1.0, abs=1e-12)


def test_support_and_nonnegativity():
    rng = np.random.default_rng(1)
    t = rng.uniform(-5, 12, 1000)
    for m in range(1, 7):
        v = eval_N(m, t)
        assert np.all(v[(t <= 0) | (t > m)] == 0.0)
        assert np.all(v >= 0.0)
    assert eval_N(3, 3.0) == 0.0


def test_integral_is_one_and_derivative_integrates_to_zero():
    for m in range(2, 7):
        # midpoint rule, exact enough and blind to the kinks of N_2'
        x = (np.arange(20000) + 0.5) * (m / 20000)
        assert eval_N(m, x).sum() * (m / 20000) == pytest.approx(1.0, abs=1e-6)
        assert eval_N_deriv(m, x).sum() * (m / 20000) == pytest.approx(0.0, abs=1e-9)


def test_derivative_matches_central_differences():
    rng = np.random.default_rng(2)
    step = 1e-5
    for m in range(3, 7):
        t = rng.uniform(0.01, m - 0.01, 100)
        fd = (eval_N(m, t + step) - eval_N(m, t - step)) / (2 * step)
        np.testing.assert_allclose(eval_N_deriv(m, t), fd, atol=1e-6)


@pytest.mark.parametrize("m, order", [(3, 1), (4, 2), (5, 2), (6, 2)])
def test_smooth_across_knots(m, order):
    # N_3'' jumps at the knots, so there the central difference is only first order
    for knot in range(1, m):
        errs = []
        for step in (1e-2, 5e-3, 2.5e-3):
            fd = (eval_N(m, knot + step) - eval_N(m, knot - step)) / (2 * step)
            errs.append(abs(fd - eval_N_deriv(m, knot)))
        if errs[0] < 1e-13:
            continue
        assert errs[0] / errs[1] == pytest.approx(2.0**order, rel=0.05)
        assert errs[1] / errs[2] == pytest.approx(2.0**order, rel=0.05)


def test_linear_spline_derivative_averages_at_knots():
    assert eval_N_deriv(2, 0.0) == 0.5
    assert eval_N_deriv(2, 1.0) == 0.0
    assert eval_N_deriv(2, 2.0) == -0.5
    assert eval_N_deriv(2, 0.5) == 1.0
    assert eval_N_deriv(2, 1.5) == -1.0


def test_symmetry():
    t = np.linspace(0, 5, 41)
    np.testing.assert_allclose(eval_N(5, t), eval_N(5, 5 - t), atol=1e-14)
    assert math.isclose(eval_N(4, 2.0), 2 / 3)
