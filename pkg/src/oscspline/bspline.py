"""Cardinal polynomial B-splines on the integer knots.

``N_m`` has order ``m`` (degree ``m - 1``), support ``(0, m]`` and is
``m - 2`` times continuously differentiable.  Values are produced by the
two-term recursion

    N_1(t) = 1 on (0, 1], 0 otherwise
    N_m(t) = (t N_{m-1}(t) + (m - t) N_{m-1}(t - 1)) / (m - 1)

evaluated bottom-up over all shifted copies at once, so a call costs
``O(m^2)`` array operations and works on scalars or numpy arrays.
"""

from __future__ import annotations

import numpy as np


def _check_order(m, minimum=1):
    if int(m) != m or m < minimum:
        raise ValueError(f"spline order must be an integer >= {minimum}, got {m!r}")
    return int(m)


def _cardinal(m, t, right_closed=True):
    t = np.asarray(t, dtype=float)
    # level-1 values at t - i, i = 0..m-1
    # right_closed=False gives the right-continuous variant used for one-sided
    # derivatives at kinks
    cell = np.ceil(t) - 1.0 if right_closed else np.floor(t)
    vals = [(cell == i).astype(float) for i in range(m)]
    for j in range(2, m + 1):
        vals = [
            ((t - i) * vals[i] + (j - (t - i)) * vals[i + 1]) / (j - 1)
            for i in range(m - j + 1)
        ]
    return vals[0]


def _scalar_if_scalar(t, out):
    if np.ndim(t) == 0:
        return float(out)
    return out


def eval_N(m, t):
    """Evaluate the cardinal B-spline ``N_m`` at ``t``.

    Args:
        m: spline order, ``m >= 1``.
        t: scalar or array of evaluation points.

    Returns:
        ``N_m(t)`` with the same shape as ``t``; exactly zero outside ``(0, m]``.
    """
    m = _check_order(m)
    return _scalar_if_scalar(t, _cardinal(m, t))


def eval_N_deriv(m, t):
    """First derivative of ``N_m`` via ``N_m' = N_{m-1}(t) - N_{m-1}(t - 1)``.

    For ``m = 2`` the derivative jumps at the knots; there the mean of the
    one-sided limits is returned, which keeps ``N_2'(1 + u) = -N_2'(1 - u)``.
    """
    m = _check_order(m, minimum=2)
    tt = np.asarray(t, dtype=float)
    out = _cardinal(m - 1, tt) - _cardinal(m - 1, tt - 1.0)
    if m == 2:
        out = 0.5 * (out + _cardinal(1, tt, False) - _cardinal(1, tt - 1.0, False))
    return _scalar_if_scalar(t, out)
