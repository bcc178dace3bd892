"""Uniform periodic spline collocation on the unit period.

A spline on a grid of size ``n`` is

    s(t) = sum_l c[l] B(n t - l)       (translates wrapped mod n)

with ``B = N_m`` for the polynomial family and ``B(u) = Q_{m,1/n}(u / n)``
for the trigonometric one.  Samples are taken at the collocation points
``t_k = (k + m/2 + sigma) / n``.  Interpolation and differentiation at these
points are circulant, so they are done by DFT division by ``phi`` (default)
or by a dense linear solve (oracle path).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .bspline import eval_N, eval_N_deriv
from .spectral import (
    POLYNOMIAL,
    SINGULAR_THRESHOLD,
    TRIGONOMETRIC,
    SymbolQuery,
    dft,
    idft,
    normalize_family,
    phi,
)
from .trigspline import TrigBasisParams, eval_Q, eval_Q_deriv


class InterpolationError(ArithmeticError):
    """Spline interpolation at the collocation points is singular."""

    def __init__(self, k, value):
        self.k = k
        self.value = value
        super().__init__(f"interpolation unstable: phi vanishes at frequency index k={k} (|phi|={abs(value):.3g})")


@dataclass(frozen=True)
class BasisSpec:
    """Spline family, order ``m``, grid size ``n`` and collocation shift ``sigma``."""

    family: str
    m: int
    n: int
    sigma: float = -0.25

    def __post_init__(self):
        object.__setattr__(self, "family", normalize_family(self.family))
        if int(self.m) != self.m or self.m < 2:
            raise ValueError(f"spline order must be an integer >= 2, got {self.m!r}")
        if int(self.n) != self.n or self.n <= self.m:
            raise ValueError(f"grid size must be an integer > m, got n={self.n!r}, m={self.m!r}")
        if not abs(self.sigma) < 0.5:
            raise ValueError(f"collocation shift must satisfy |sigma| < 1/2, got {self.sigma!r}")
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "sigma", float(self.sigma))

    @property
    def h(self):
        return 1.0 / self.n

    @property
    def short_family(self):
        return "poly" if self.family == POLYNOMIAL else "trig"

    def basis(self, u):
        """``B(u)`` in grid units."""
        if self.family == POLYNOMIAL:
            return eval_N(self.m, u)
        return eval_Q(TrigBasisParams(self.m, self.h), np.asarray(u, dtype=float) * self.h)

    def basis_dt(self, u):
        """Time derivative of ``t -> B(n t)`` at ``u = n t``."""
        if self.family == POLYNOMIAL:
            return self.n * eval_N_deriv(self.m, u)
        return eval_Q_deriv(TrigBasisParams(self.m, self.h), np.asarray(u, dtype=float) * self.h)


@dataclass(frozen=True)
class SplineFunction:
    """Coefficients of a (possibly vector-valued) periodic spline.

    ``coeffs`` has shape ``(d, n)``: one coefficient sequence per state
    dimension.
    """

    spec: BasisSpec
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        if c.ndim == 1:
            c = c[None, :]
        if c.ndim != 2 or c.shape[1] != self.spec.n:
            raise ValueError(f"expected {self.spec.n} coefficients per dimension, got shape {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def dim(self):
        return self.coeffs.shape[0]

    def __call__(self, t):
        return evaluate(self, t)

    def to_csv(self, fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["family", "m", "n", "sigma"])
        w.writerow([self.spec.short_family, self.spec.m, self.spec.n, repr(self.spec.sigma)])
        w.writerow(["dim", "index", "coeff"])
        for d, row in enumerate(self.coeffs):
            for i, c in enumerate(row):
                w.writerow([d, i, repr(float(c))])

    @classmethod
    def from_csv(cls, fh):
        rows = list(csv.reader(fh))
        family, m, n, sigma = rows[1]
        spec = BasisSpec(family, int(m), int(n), float(sigma))
        dims = 1 + max(int(r[0]) for r in rows[3:])
        c = np.zeros((dims, spec.n))
        for d, i, v in rows[3:]:
            c[int(d), int(i)] = float(v)
        return cls(spec, c)


def collocation_points(spec: BasisSpec) -> np.ndarray:
    """``t_k = (k + m/2 + sigma) / n`` reduced mod 1, ``k = 0..n-1``."""
    k = np.arange(spec.n)
    return np.mod((k + spec.m / 2.0 + spec.sigma) / spec.n, 1.0)


def _wrapped_args(spec, t):
    """Grid-unit arguments ``(n t - l) mod n`` for every translate ``l``; shape ``(len(t), n)``."""
    u = spec.n * np.mod(np.atleast_1d(np.asarray(t, dtype=float)), 1.0)
    return np.mod(u[:, None] - np.arange(spec.n)[None, :], spec.n)


def collocation_matrix(spec: BasisSpec, t=None) -> np.ndarray:
    """Matrix of basis values: ``A[k, l] = B((n t_k - l) mod n)``."""
    if t is None:
        t = collocation_points(spec)
    return spec.basis(_wrapped_args(spec, t))


def derivative_matrix(spec: BasisSpec, t=None) -> np.ndarray:
    """Matrix of basis time-derivatives at ``t`` (collocation points by default)."""
    if t is None:
        t = collocation_points(spec)
    return spec.basis_dt(_wrapped_args(spec, t))


def interpolation_symbol(spec: BasisSpec) -> np.ndarray:
    """``phi(sigma, k/n)`` for ``k = 0..n-1``."""
    return np.array(
        [phi(SymbolQuery(spec.family, spec.m, spec.h, spec.sigma, k / spec.n)) for k in range(spec.n)]
    )


def interpolate(spec: BasisSpec, samples, method="dft") -> SplineFunction:
    """Spline coefficients reproducing ``samples`` at the collocation points.

    ``samples`` is either ``n`` values or a ``(d, n)`` array.  ``method`` is
    ``"dft"`` (division by ``phi``) or ``"dense"`` (direct circulant solve).

    Raises:
        InterpolationError: if ``phi(sigma, k/n)`` vanishes for some ``k``.
    """
    y = np.asarray(samples, dtype=float)
    y2 = y[None, :] if y.ndim == 1 else y
    if y2.shape[-1] != spec.n:
        raise ValueError(f"expected {spec.n} samples per dimension, got shape {y.shape}")
    sym = interpolation_symbol(spec)
    bad = np.flatnonzero(np.abs(sym) < SINGULAR_THRESHOLD)
    if bad.size:
        raise InterpolationError(int(bad[0]), sym[bad[0]])
    if method == "dft":
        c = np.array([idft(dft(row) / sym).real for row in y2])
    elif method == "dense":
        c = np.linalg.solve(collocation_matrix(spec), y2.T).T
    else:
        raise ValueError(f"unknown interpolation method {method!r}")
    return SplineFunction(spec, c)


def evaluate(f: SplineFunction, t) -> np.ndarray:
    """Values of ``f`` at ``t`` (wrapped mod 1).

    Returns shape ``(d,)`` for scalar ``t`` and ``(d, len(t))`` otherwise.
    """
    vals = f.coeffs @ collocation_matrix(f.spec, t).T
    return vals[:, 0] if np.ndim(t) == 0 else vals


def evaluate_derivative(f: SplineFunction, t) -> np.ndarray:
    """Time derivative of ``f`` at ``t``; same shapes as :func:`evaluate`."""
    vals = f.coeffs @ derivative_matrix(f.spec, t).T
    return vals[:, 0] if np.ndim(t) == 0 else vals


def differentiate_at_collocation(f: SplineFunction) -> np.ndarray:
    """``s'(t_k)`` for every collocation point, shape ``(d, n)``.

    For a scalar spline the leading axis is dropped.
    """
    out = f.coeffs @ derivative_matrix(f.spec).T
    return out[0] if f.dim == 1 else out


def assemble_diff_operator(spec: BasisSpec) -> np.ndarray:
    """Circulant matrix ``D`` mapping collocation samples to derivative samples."""
    e0 = np.zeros(spec.n)
    e0[0] = 1.0
    col = differentiate_at_collocation(interpolate(spec, e0))
    return scipy.linalg.circulant(col)


__all__ = [
    "BasisSpec",
    "InterpolationError",
    "POLYNOMIAL",
    "SplineFunction",
    "TRIGONOMETRIC",
    "assemble_diff_operator",
    "collocation_matrix",
    "collocation_points",
    "derivative_matrix",
    "differentiate_at_collocation",
    "evaluate",
    "evaluate_derivative",
    "interpolate",
    "interpolation_symbol",
]
