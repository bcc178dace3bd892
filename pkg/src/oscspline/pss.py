"""Periodic steady state of autonomous oscillators by spline collocation.

The orbit is parametrized on normalized time ``tau`` in ``[0, 1)`` so the
basis keeps a unit period; the unknown period ``T`` enters as

    (1/T) x'(tau_k) - f(x(tau_k)) = 0,    k = 0..n-1,

for every state dimension, closed by the phase anchor
``x_{d0}(tau_0) = a0``.  Unknowns are the spline coefficients of all
dimensions (dimension-major) followed by ``T``.  The system is solved by a
damped Newton iteration with dense LU solves.

A fixed-step RK4 integrator provides warm starts and reference values that
do not depend on any of the spline machinery.
"""

from __future__ import annotations

import csv
import json
import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .collocation import (
    BasisSpec,
    SplineFunction,
    collocation_matrix,
    collocation_points,
    derivative_matrix,
    evaluate,
    interpolate,
)
from .models import OscillatorModel

log = logging.getLogger(__name__)

MIN_STEP = 2.0**-10


class PSSError(RuntimeError):
    """Newton iteration broke down (singular Jacobian, invalid period)."""

    def __init__(self, message, iteration=None):
        self.iteration = iteration
        super().__init__(message if iteration is None else f"{message} (iteration {iteration})")


class IntegrationError(RuntimeError):
    def __init__(self, time):
        self.time = time
        super().__init__(f"non-finite state at t={time:.6g}")


class InsufficientDataError(ValueError):
    pass


@dataclass(frozen=True)
class NewtonOptions:
    max_iter: int = 50
    tol: float = 1e-10
    damping_factor: float = 1.0

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if not 0.0 < self.damping_factor <= 1.0:
            raise ValueError("damping_factor must lie in (0, 1]")
        if self.max_iter < 0:
            raise ValueError("max_iter must be >= 0")


@dataclass(frozen=True)
class PSSProblem:
    model: OscillatorModel
    spec: BasisSpec
    initial_guess: SplineFunction
    T0: float
    phase_anchor: tuple[int, float] = (0, 0.0)
    newton: NewtonOptions = field(default_factory=NewtonOptions)

    def __post_init__(self):
        if not self.T0 > 0:
            raise ValueError(f"initial period must be positive, got {self.T0!r}")
        d0 = self.phase_anchor[0]
        if not 0 <= d0 < self.model.dimension:
            raise ValueError(f"phase anchor dimension {d0} out of range for a {self.model.dimension}-d model")
        if self.initial_guess.dim != self.model.dimension:
            raise ValueError("initial guess dimension does not match the model")
        if self.initial_guess.spec != self.spec:
            raise ValueError("initial guess uses a different basis")

    @property
    def size(self):
        return self.spec.n * self.model.dimension + 1

    def pack(self, spline: SplineFunction, period: float) -> np.ndarray:
        return np.concatenate([spline.coeffs.ravel(), [period]])

    def unpack(self, z):
        z = np.asarray(z, dtype=float)
        c = z[:-1].reshape(self.model.dimension, self.spec.n)
        return c, float(z[-1])

    def initial_unknowns(self):
        return self.pack(self.initial_guess, self.T0)


@dataclass
class PSSolution:
    spline: SplineFunction
    period: float
    residual_norm: float
    iterations: int
    converged: bool
    trace: list = field(default_factory=list)
    fd_jacobian: bool = False

    def waveform(self, samples=512):
        tau = np.arange(samples) / samples
        return tau, evaluate(self.spline, tau)

    def amplitude(self, dim=0, samples=4096):
        """Half the peak-to-peak excursion of one state variable."""
        _, x = self.waveform(samples)
        return 0.5 * float(x[dim].max() - x[dim].min())

    def to_dict(self):
        spec = self.spline.spec
        return {
            "family": spec.short_family,
            "m": spec.m,
            "n": spec.n,
            "sigma": spec.sigma,
            "period": self.period,
            "residual_norm": self.residual_norm,
            "iterations": self.iterations,
            "converged": self.converged,
            "coefficients": [row.tolist() for row in self.spline.coeffs],
        }

    def to_json(self, fh):
        json.dump(self.to_dict(), fh, indent=2)
        fh.write("\n")

    def waveform_csv(self, fh, samples=512):
        """Dense samples in physical time: columns ``t, x_0, ..., x_{d-1}``."""
        tau, x = self.waveform(samples)
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t"] + [f"x_{d}" for d in range(x.shape[0])])
        for i, s in enumerate(tau):
            w.writerow([repr(float(s * self.period))] + [repr(float(v)) for v in x[:, i]])


@lru_cache(maxsize=64)
def _matrices(spec: BasisSpec):
    A = collocation_matrix(spec)
    dA = derivative_matrix(spec)
    A.setflags(write=False)
    dA.setflags(write=False)
    return A, dA


def _states(problem, c):
    A, dA = _matrices(problem.spec)
    return c @ A.T, c @ dA.T


def pss_residual(problem: PSSProblem, unknowns) -> np.ndarray:
    """Collocation residual ``(1/T) x' - f(x)`` per dimension and point, then the phase anchor."""
    c, T = problem.unpack(unknowns)
    if not T > 0:
        raise PSSError(f"period must be positive, got {T!r}")
    x, dx = _states(problem, c)
    f = np.array([problem.model.rhs(x[:, k]) for k in range(problem.spec.n)]).T
    d0, a0 = problem.phase_anchor
    return np.concatenate([(dx / T - f).ravel(), [x[d0, 0] - a0]])


def _fd_model_jac(model, x, eps=1e-7):
    f0 = model.rhs(x)
    J = np.empty((len(f0), len(x)))
    for j in range(len(x)):
        xp = x.copy()
        step = eps * max(1.0, abs(x[j]))
        xp[j] += step
        J[:, j] = (model.rhs(xp) - f0) / step
    return J


def pss_jacobian(problem: PSSProblem, unknowns) -> np.ndarray:
    """Analytic Jacobian of :func:`pss_residual`.

    Models without ``jac`` fall back to finite differences of ``rhs``.
    """
    c, T = problem.unpack(unknowns)
    A, dA = _matrices(problem.spec)
    x, dx = _states(problem, c)
    n, d = problem.spec.n, problem.model.dimension
    jac = problem.model.jac or (lambda s: _fd_model_jac(problem.model, s))
    Jf = np.array([jac(x[:, k]) for k in range(n)])  # (n, d, d)
    J = np.zeros((n * d + 1, n * d + 1))
    for a in range(d):
        rows = slice(a * n, (a + 1) * n)
        for b in range(d):
            cols = slice(b * n, (b + 1) * n)
            J[rows, cols] = -Jf[:, a, b][:, None] * A
        J[rows, rows] += dA / T
        J[rows, -1] = -dx[a] / T**2
    d0 = problem.phase_anchor[0]
    J[-1, d0 * n : (d0 + 1) * n] = A[0]
    return J


def newton_solve(problem: PSSProblem) -> PSSolution:
    """Damped Newton iteration from ``problem.initial_guess``.

    Each step starts at ``damping_factor`` and is halved until the residual
    norm decreases; if even a step of ``2**-10`` fails the iteration stops
    and the best iterate is returned unconverged.

    Raises:
        PSSError: on a singular Jacobian.
    """
    opts = problem.newton
    z = problem.initial_unknowns()
    r = pss_residual(problem, z)
    norm = float(np.linalg.norm(r))
    trace = [norm]
    it = 0
    while norm > opts.tol and it < opts.max_iter:
        J = pss_jacobian(problem, z)
        try:
            dz = np.linalg.solve(J, -r)
        except np.linalg.LinAlgError:
            raise PSSError("singular Jacobian", it) from None
        if not np.all(np.isfinite(dz)):
            raise PSSError("singular Jacobian", it)
        step = opts.damping_factor
        accepted = False
        while step >= MIN_STEP:
            z_try = z + step * dz
            if z_try[-1] > 0:
                r_try = pss_residual(problem, z_try)
                norm_try = float(np.linalg.norm(r_try))
                if norm_try < norm:
                    accepted = True
                    break
            step *= 0.5
        it += 1
        if not accepted:
            log.debug("newton: no decrease at iteration %d, stopping", it)
            break
        z, r, norm = z_try, r_try, norm_try
        trace.append(norm)
        log.debug("newton: iteration %d step %.4g residual %.3e", it, step, norm)
    c, T = problem.unpack(z)
    return PSSolution(
        spline=SplineFunction(problem.spec, c),
        period=T,
        residual_norm=norm,
        iterations=it,
        converged=norm <= opts.tol,
        trace=trace,
        fd_jacobian=problem.model.jac is None,
    )


@dataclass(frozen=True)
class Trajectory:
    t: np.ndarray
    x: np.ndarray  # shape (steps + 1, d)


def transient_oracle(model: OscillatorModel, t_end, dt, x0) -> Trajectory:
    """Classical fixed-step RK4 from ``x0`` over ``[0, t_end]``.

    Raises:
        IntegrationError: when the state stops being finite.
    """
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt!r}")
    steps = int(math.ceil(t_end / dt - 1e-9))
    f = model.rhs
    x = np.array(x0, dtype=float)
    out = np.empty((steps + 1, x.size))
    out[0] = x
    half = 0.5 * dt
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(steps):
            k1 = f(x)
            k2 = f(x + half * k1)
            k3 = f(x + half * k2)
            k4 = f(x + dt * k3)
            x = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if not np.all(np.isfinite(x)):
                raise IntegrationError((i + 1) * dt)
            out[i + 1] = x
    return Trajectory(np.arange(steps + 1) * dt, out)


def _upward_crossings(t, y):
    idx = np.flatnonzero((y[:-1] < 0.0) & (y[1:] >= 0.0))
    frac = -y[idx] / (y[idx + 1] - y[idx])
    return t[idx] + frac * (t[idx + 1] - t[idx])


def _peak(y, i):
    """Parabolic refinement of a sampled extremum at index ``i``."""
    if 0 < i < len(y) - 1:
        a, b, c = y[i - 1], y[i], y[i + 1]
        den = a - 2 * b + c
        if den != 0.0:
            return b - 0.125 * (a - c) ** 2 / den
    return y[i]


def estimate_amplitude_period(traj: Trajectory, dimension=0, discard=0.5):
    """Amplitude and period of one state variable after a warm-up.

    The period is the mean spacing of upward crossings of the mean-centered
    signal; the amplitude is half the peak-to-peak swing over the last full
    period.

    Raises:
        InsufficientDataError: with fewer than three crossings.
    """
    start = int(len(traj.t) * discard)
    t = traj.t[start:]
    y = traj.x[start:, dimension]
    yc = y - y.mean()
    cross = _upward_crossings(t, yc)
    if len(cross) < 3:
        raise InsufficientDataError(f"need at least 3 mean crossings, found {len(cross)}")
    period = float(np.mean(np.diff(cross)))
    window = (t >= cross[-2]) & (t <= cross[-1])
    idx = np.flatnonzero(window)
    seg = y[idx[0] - 1 : idx[-1] + 2] if idx[0] > 0 and idx[-1] + 2 <= len(y) else y[idx]
    hi = _peak(seg, int(np.argmax(seg)))
    lo = -_peak(-seg, int(np.argmax(-seg)))
    return 0.5 * float(hi - lo), period


@dataclass(frozen=True)
class WarmStart:
    guess: SplineFunction
    period: float
    anchor: tuple[int, float]
    amplitude: float


def warm_start(model: OscillatorModel, spec: BasisSpec, dim=0, x0=None, period_guess=None, periods=20,
               steps_per_period=2000) -> WarmStart:
    """Initial guess for :func:`newton_solve` from a transient run.

    Integrates ``periods`` estimated periods, discards the first half, and
    resamples one period starting at an upward mean crossing of ``dim`` so
    that the crossing lands on the first collocation point.  The anchor is
    that crossing level.
    """
    if x0 is None:
        x0 = model.initial_state
    if period_guess is None:
        period_guess = model.reference.period if model.reference else None
    if period_guess is None:
        pre = transient_oracle(model, 200.0, 0.01, x0)
        _, period_guess = estimate_amplitude_period(pre, dim)
    dt = period_guess / steps_per_period
    traj = transient_oracle(model, periods * period_guess, dt, x0)
    amplitude, period = estimate_amplitude_period(traj, dim)
    start = len(traj.t) // 2
    t = traj.t[start:]
    y = traj.x[start:]
    level = float(y[:, dim].mean())
    cross = _upward_crossings(t, y[:, dim] - level)
    t_c = cross[-2]
    tau = collocation_points(spec)
    times = t_c + np.mod(tau - tau[0], 1.0) * period
    samples = np.array([np.interp(times, t, y[:, j]) for j in range(model.dimension)])
    guess = interpolate(spec, samples)
    return WarmStart(guess, period, (dim, level), amplitude)


def solve_pss(model: OscillatorModel, spec: BasisSpec, dim=0, newton: NewtonOptions | None = None,
              **warm_kwargs) -> PSSolution:
    """Warm start plus Newton solve in one call."""
    ws = warm_start(model, spec, dim=dim, **warm_kwargs)
    problem = PSSProblem(model, spec, ws.guess, ws.period, ws.anchor, newton or NewtonOptions())
    return newton_solve(problem)
