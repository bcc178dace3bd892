"""Fourier symbols of uniform spline collocation.

Interpolating at the shifted points ``t_k = (k + m/2 + x) / n`` is a cyclic
convolution of the coefficients with the sampled basis, so under the DFT

    x_hat[k] = sum_l x[l] exp(+2 pi i k l / n)

it becomes a division by the exponential Euler spline

    phi(x, xi) = sum_k B(x + m/2 + k) exp(2 pi i k xi),

and differentiation becomes multiplication by ``psi = d/dx phi / phi``.  The
real part of ``psi`` is the damping rate of a mode: positive values drain
energy from that frequency.

Units: the polynomial ``psi`` is a derivative with respect to the shift
``x`` (grid units), as in the classical definition.  The trigonometric
``psi`` is returned per unit of time on the unit period, so an exactly
reproduced mode ``exp(-2 pi i k t)`` sits at ``xi = k/n`` with
``psi = -2 pi i k``.  :meth:`Spectrum.per_period` converts either family to
time units.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .bspline import eval_N, eval_N_deriv
from .trigspline import TrigBasisParams, eval_Q, eval_Q_deriv

POLYNOMIAL = "polynomial"
TRIGONOMETRIC = "trigonometric"

SINGULAR_THRESHOLD = 1e-10

_FAMILY_ALIASES = {
    "polynomial": POLYNOMIAL,
    "poly": POLYNOMIAL,
    "trigonometric": TRIGONOMETRIC,
    "trig": TRIGONOMETRIC,
}


class SingularSymbolError(ArithmeticError):
    """Raised when ``phi`` vanishes (numerically) at the queried point."""

    def __init__(self, x, xi, value):
        self.x = x
        self.xi = xi
        self.value = value
        super().__init__(f"phi is singular at (x={x:.6g}, xi={xi:.6g}): |phi|={abs(value):.3g}")


def normalize_family(family):
    try:
        return _FAMILY_ALIASES[str(family).lower()]
    except KeyError:
        raise ValueError(f"unknown spline family {family!r}; use 'poly' or 'trig'") from None


@dataclass(frozen=True)
class SymbolQuery:
    """Point ``(x, xi)`` at which a symbol of the given basis is evaluated.

    ``h`` is the mesh size of the trigonometric family and is ignored for
    polynomial splines.
    """

    family: str
    m: int
    h: float = 0.0
    x: float = 0.0
    xi: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "family", normalize_family(self.family))
        if int(self.m) != self.m or self.m < 1:
            raise ValueError(f"spline order must be an integer >= 1, got {self.m!r}")
        if self.family == TRIGONOMETRIC:
            TrigBasisParams(self.m, self.h)

    @property
    def near_singular_shift(self):
        """True when ``|x| >= 1/2``, where differentiation becomes unstable."""
        return abs(self.x) >= 0.5


def dft(samples, method="direct"):
    """Unnormalized DFT with positive exponent.

    ``method="fft"`` routes through numpy's FFT; both agree to round-off.
    """
    v = np.asarray(samples, dtype=complex)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("dft needs a non-empty 1-d sequence")
    n = v.size
    if method == "fft":
        return np.fft.ifft(v) * n
    if method != "direct":
        raise ValueError(f"unknown dft method {method!r}")
    k = np.arange(n)
    return np.exp(2j * np.pi * np.outer(k, k) / n) @ v


def idft(coeffs, method="direct"):
    """Inverse of :func:`dft`: negative exponent and a ``1/n`` factor."""
    v = np.asarray(coeffs, dtype=complex)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("idft needs a non-empty 1-d sequence")
    n = v.size
    if method == "fft":
        return np.fft.fft(v) / n
    if method != "direct":
        raise ValueError(f"unknown dft method {method!r}")
    k = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(k, k) / n) @ v / n


def _terms(family, m, h, x):
    """Shifts ``k`` with a nonzero basis value, the values and their x-derivatives."""
    base = x + m / 2.0
    # B(base + k) is nonzero only for base + k in (0, m]
    ks = np.arange(math.floor(-base), math.floor(m - base) + 2)
    u = base + ks
    if family == POLYNOMIAL:
        vals = eval_N(m, u)
        ders = eval_N_deriv(m, u) if m >= 2 else np.zeros_like(u)
    else:
        p = TrigBasisParams(m, h)
        vals = eval_Q(p, h * u)
        # per unit time, not per unit x: d/dx Q(h u) = h Q'(h u)
        ders = eval_Q_deriv(p, h * u) if m >= 2 else np.zeros_like(u)
    keep = vals != 0.0
    keep |= ders != 0.0
    return ks[keep], vals[keep], ders[keep]


def _phase(ks, xi):
    return np.exp(2j * np.pi * np.outer(np.atleast_1d(xi), ks))


def phi(q: SymbolQuery) -> complex:
    """Exponential Euler spline of the basis at ``(q.x, q.xi)``.

    The sum has at most ``m + 1`` nonzero terms, so it is exact.
    """
    ks, vals, _ = _terms(q.family, q.m, q.h, q.x)
    return complex((_phase(ks, q.xi) @ vals)[0])


def phi_dx(q: SymbolQuery) -> complex:
    """Shift derivative of :func:`phi` (time derivative for the trigonometric family)."""
    ks, _, ders = _terms(q.family, q.m, q.h, q.x)
    return complex((_phase(ks, q.xi) @ ders)[0])


def psi_values(family, m, h, x, xis):
    """Vectorized :func:`psi` over ``xis``; singular entries come back as ``nan``.

    Returns ``(values, singular_mask)``.
    """
    family = normalize_family(family)
    ks, vals, ders = _terms(family, m, h, x)
    ph = _phase(ks, xis)
    num = ph @ ders
    den = ph @ vals
    singular = np.abs(den) < SINGULAR_THRESHOLD
    out = np.full(den.shape, np.nan + 1j * np.nan)
    out[~singular] = num[~singular] / den[~singular]
    return out, singular


def psi(q: SymbolQuery) -> complex:
    """Damping symbol ``d/dx phi / phi`` at ``(q.x, q.xi)``.

    Raises:
        SingularSymbolError: if ``|phi| < 1e-10`` at the query point.
    """
    ks, vals, ders = _terms(q.family, q.m, q.h, q.x)
    ph = _phase(ks, q.xi)
    den = complex((ph @ vals)[0])
    if abs(den) < SINGULAR_THRESHOLD:
        raise SingularSymbolError(q.x, q.xi, den)
    return complex((ph @ ders)[0]) / den


@dataclass(frozen=True)
class Spectrum:
    """Damping symbol sampled at ``xi = k/n``, ``k = 0..n-1``.

    ``values`` holds ``nan`` where ``singular`` is set.
    """

    xi: np.ndarray
    values: np.ndarray
    singular: np.ndarray
    query: SymbolQuery
    n: int

    def __len__(self):
        return len(self.xi)

    @property
    def entries(self):
        return [(float(x), None if s else complex(v)) for x, v, s in zip(self.xi, self.values, self.singular)]

    def per_period(self):
        """Multipliers mapping sample DFTs to time-derivative DFTs on the unit period."""
        scale = self.n if self.query.family == POLYNOMIAL else 1.0
        return self.values * scale

    def to_csv(self, fh):
        """Write columns ``xi, re_psi, im_psi, singular`` to an open text file."""
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["xi", "re_psi", "im_psi", "singular"])
        for x, v, s in zip(self.xi, self.values, self.singular):
            if s:
                w.writerow([repr(float(x)), "nan", "nan", 1])
            else:
                w.writerow([repr(float(x)), repr(float(v.real)), repr(float(v.imag)), 0])


def damping_spectrum(family, m, n, sigma) -> Spectrum:
    """Sample ``psi(sigma, k/n)`` for ``k = 0..n-1`` on a grid of size ``n``."""
    family = normalize_family(family)
    if int(n) != n or n < 2 * m:
        raise ValueError(f"grid size must be an integer >= 2*m, got n={n!r}, m={m!r}")
    if not abs(sigma) < 0.5:
        raise ValueError(f"collocation shift must satisfy |sigma| < 1/2, got {sigma!r}")
    n = int(n)
    h = 1.0 / n
    q = SymbolQuery(family, m, h, sigma, 0.0)
    xi = np.arange(n) / n
    values, singular = psi_values(family, m, h, sigma, xi)
    return Spectrum(xi=xi, values=values, singular=singular, query=q, n=n)
