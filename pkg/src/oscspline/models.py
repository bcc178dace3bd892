"""Built-in autonomous oscillators.

Each model is a plain right-hand side ``f`` with its analytic Jacobian.
They stand in for the circuit examples: the circle model has an exactly
known cycle that lies in the trigonometric spline space of order 3, and
van der Pol is the usual self-excited benchmark.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class Reference:
    amplitude: float
    period: float
    source: str


@dataclass(frozen=True)
class OscillatorModel:
    name: str
    dimension: int
    parameters: dict
    rhs: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    jac: Callable[[np.ndarray], np.ndarray] | None = field(default=None, repr=False)
    reference: Reference | None = None
    initial_state: tuple = (2.0, 0.0)

    def __call__(self, x):
        return self.rhs(x)


def circle_model() -> OscillatorModel:
    """Hopf normal form with the unit circle as limit cycle, period 1.

    ``f(x, y) = (x (1 - r^2) - 2 pi y, y (1 - r^2) + 2 pi x)``.
    """
    w = 2.0 * math.pi

    def rhs(s):
        x, y = s[0], s[1]
        g = 1.0 - x * x - y * y
        return np.array([x * g - w * y, y * g + w * x])

    def jac(s):
        x, y = s[0], s[1]
        g = 1.0 - x * x - y * y
        return np.array([[g - 2 * x * x, -2 * x * y - w], [-2 * x * y + w, g - 2 * y * y]])

    return OscillatorModel("circle", 2, {}, rhs, jac, Reference(1.0, 1.0, "analytic"))


# RK4 values for mu = 1, see tests/test_models.py for the dt-halving check
VDP_MU1_AMPLITUDE = 2.0086198608
VDP_MU1_PERIOD = 6.6632868543


def van_der_pol(mu: float = 1.0) -> OscillatorModel:
    """``x' = v``, ``v' = mu (1 - x^2) v - x``."""
    mu = float(mu)

    def rhs(s):
        x, v = s[0], s[1]
        return np.array([v, mu * (1.0 - x * x) * v - x])

    def jac(s):
        x, v = s[0], s[1]
        return np.array([[0.0, 1.0], [-2.0 * mu * x * v - 1.0, mu * (1.0 - x * x)]])

    ref = None
    if mu == 1.0 and VDP_MU1_AMPLITUDE is not None:
        ref = Reference(VDP_MU1_AMPLITUDE, VDP_MU1_PERIOD, "rk4-oracle")
    return OscillatorModel("vanderpol", 2, {"mu": mu}, rhs, jac, ref)


MODELS = {
    "circle": circle_model,
    "vanderpol": van_der_pol,
}


def get_model(name: str, **params) -> OscillatorModel:
    """Build a model by name; unknown names raise ``KeyError`` listing the choices."""
    key = name.lower().replace("_", "").replace("-", "")
    if key not in MODELS:
        raise KeyError(f"unknown model {name!r}; available: {', '.join(sorted(MODELS))}")
    return MODELS[key](**params)
