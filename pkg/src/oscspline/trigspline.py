"""Trigonometric B-splines for 1-periodic uniform grids.

``Q_{m,h}`` is built from sines instead of linear weights:

    Q_{1,h}(t) = 1 on (0, h], 0 otherwise
    Q_{m,h}(t) = (sin(pi t) Q_{m-1,h}(t) + sin(pi (h m - t)) Q_{m-1,h}(t - h))
                 / sin(pi h (m - 1))

Its support is ``(0, m h]``.  For odd ``m`` the translates ``Q_{m,h}(t - k h)``
span piecewise trigonometric polynomials that contain ``1``, ``cos 2 pi t``
and ``sin 2 pi t`` (up to frequency ``(m - 1) / 2``), which is what removes
the damping of the fundamental in a collocation scheme.  For small ``h``,
``Q_{m,h}(h u)`` approaches the cardinal spline ``N_m(u)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class TrigBasisParams:
    """Order ``m`` and mesh size ``h`` of a trigonometric B-spline.

    The translates form a stable basis only while ``h * m < 1``.
    """

    m: int
    h: float

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise ValueError(f"spline order must be an integer >= 1, got {self.m!r}")
        if not 0.0 < self.h < 1.0:
            raise ValueError(f"mesh size must lie in (0, 1), got {self.h!r}")
        if self.h * self.m >= 1.0:
            raise ValueError(f"trigonometric basis requires h*m < 1, got h={self.h!r}, m={self.m!r}")


def _levels(m, h, t, with_deriv, right_closed=True):
    t = np.asarray(t, dtype=float)
    s = [t - i * h for i in range(m)]
    # base level from the interval index so rounding in t - i*h leaves no gaps
    u = t / h
    cell = np.ceil(u) - 1.0 if right_closed else np.floor(u)
    q = [(cell == i).astype(float) for i in range(m)]
    dq = [np.zeros_like(t) for _ in range(m)] if with_deriv else None
    for j in range(2, m + 1):
        den = math.sin(math.pi * h * (j - 1))
        nq = []
        ndq = []
        for i in range(m - j + 1):
            left = np.sin(np.pi * s[i])
            right = np.sin(np.pi * (h * j - s[i]))
            nq.append((left * q[i] + right * q[i + 1]) / den)
            if with_deriv:
                dleft = np.pi * np.cos(np.pi * s[i])
                dright = -np.pi * np.cos(np.pi * (h * j - s[i]))
                ndq.append(
                    (dleft * q[i] + left * dq[i] + dright * q[i + 1] + right * dq[i + 1]) / den
                )
        q, dq = nq, ndq
    return q[0], (dq[0] if with_deriv else None)


def _as_output(t, out):
    if np.ndim(t) == 0:
        return float(out)
    return out


def eval_Q(p: TrigBasisParams, t):
    """Evaluate ``Q_{m,h}(t)``; zero outside ``(0, m h]``."""
    q, _ = _levels(p.m, p.h, t, with_deriv=False)
    return _as_output(t, q)


def eval_Q_deriv(p: TrigBasisParams, t):
    """Derivative ``d/dt Q_{m,h}(t)``.

    The product rule is applied at every level of the recursion, carrying
    ``(Q, Q')`` together.  For ``m = 2`` the derivative jumps at multiples
    of ``h`` and the right-hand limit is returned there.
    """
    if p.m < 2:
        raise ValueError("derivative requires order m >= 2")
    _, dq = _levels(p.m, p.h, t, with_deriv=True, right_closed=p.m > 2)
    return _as_output(t, dq)
