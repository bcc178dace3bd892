"""Periodic spline collocation with polynomial and trigonometric B-splines.

Quantifies the numerical damping of spline collocation through the
differentiation symbol and computes periodic steady states of autonomous
oscillators.
"""

from .bspline import eval_N, eval_N_deriv
from .collocation import (
    BasisSpec,
    InterpolationError,
    SplineFunction,
    assemble_diff_operator,
    collocation_points,
    differentiate_at_collocation,
    evaluate,
    interpolate,
)
from .models import OscillatorModel, circle_model, get_model, van_der_pol
from .pss import (
    PSSError,
    PSSProblem,
    PSSolution,
    newton_solve,
    pss_jacobian,
    pss_residual,
    transient_oracle,
)
from .spectral import SingularSymbolError, Spectrum, SymbolQuery, damping_spectrum, dft, idft, phi, psi
from .trigspline import TrigBasisParams, eval_Q, eval_Q_deriv

__version__ = "0.1.0"

__all__ = [
    "BasisSpec",
    "InterpolationError",
    "OscillatorModel",
    "PSSError",
    "PSSProblem",
    "PSSolution",
    "SingularSymbolError",
    "SplineFunction",
    "Spectrum",
    "SymbolQuery",
    "TrigBasisParams",
    "assemble_diff_operator",
    "circle_model",
    "collocation_points",
    "damping_spectrum",
    "dft",
    "differentiate_at_collocation",
    "eval_N",
    "eval_N_deriv",
    "eval_Q",
    "eval_Q_deriv",
    "evaluate",
    "get_model",
    "idft",
    "interpolate",
    "newton_solve",
    "phi",
    "psi",
    "pss_jacobian",
    "pss_residual",
    "transient_oracle",
    "van_der_pol",
]
