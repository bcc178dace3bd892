import math

import numpy as np
import pytest

from oscspline.models import VDP_MU1_AMPLITUDE, VDP_MU1_PERIOD, circle_model, get_model, van_der_pol
from oscspline.pss import estimate_amplitude_period, transient_oracle

MODELS = [circle_model(), van_der_pol(1.0), van_der_pol(3.0)]


@pytest.mark.parametrize("model", MODELS, ids=lambda m: f"{m.name}{m.parameters}")
def test_jacobian_matches_finite_differences(model):
    rng = np.random.default_rng(20)
    for _ in range(20):
        x = rng.uniform(-3, 3, model.dimension)
        J = model.jac(x)
        step = 1e-6
        for j in range(model.dimension):
            e = np.zeros(model.dimension)
            e[j] = step
            fd = (model.rhs(x + e) - model.rhs(x - e)) / (2 * step)
            np.testing.assert_allclose(J[:, j], fd, rtol=1e-6, atol=1e-6 * np.abs(J).max())


def test_circle_examples():
    f = circle_model().rhs
    np.testing.assert_allclose(f(np.array([1.0, 0.0])), [0.0, 2 * math.pi], atol=1e-15)
    np.testing.assert_allclose(f(np.array([0.0, 0.0])), [0.0, 0.0])
    # radial speed r (1 - r^2) at r = 0.5
    x = np.array([0.5, 0.0])
    assert f(x)[0] == pytest.approx(0.375)


def test_circle_exact_cycle():
    f = circle_model().rhs
    for tau in np.random.default_rng(21).random(100):
        x = np.array([math.cos(2 * math.pi * tau), math.sin(2 * math.pi * tau)])
        dx = 2 * math.pi * np.array([-x[1], x[0]])
        np.testing.assert_allclose(f(x), dx, atol=1e-12)


def test_van_der_pol_examples():
    f = van_der_pol(1.0).rhs
    np.testing.assert_allclose(f(np.array([0.0, 0.0])), [0.0, 0.0])
    np.testing.assert_allclose(f(np.array([1.0, 1.0])), [1.0, -1.0])


def test_reference_only_for_mu_one():
    assert van_der_pol(1.0).reference.source == "rk4-oracle"
    assert van_der_pol(2.0).reference is None


def test_registry():
    assert get_model("vanderpol", mu=2.0).parameters == {"mu": 2.0}
    assert get_model("van_der_pol").name == "vanderpol"
    with pytest.raises(KeyError, match="circle"):
        get_model("colpitts")


def test_van_der_pol_reference_is_dt_converged():
    """RK4 at dt and dt/2 must agree to 6 digits and match the frozen constants."""
    model = van_der_pol(1.0)
    results = [estimate_amplitude_period(transient_oracle(model, 80.0, dt, (2.0, 0.0))) for dt in (2e-3, 1e-3)]
    (a1, p1), (a2, p2) = results
    assert abs(a1 - a2) < 1e-6 * a2
    assert abs(p1 - p2) < 1e-6 * p2
    assert a2 == pytest.approx(VDP_MU1_AMPLITUDE, rel=1e-6)
    assert p2 == pytest.approx(VDP_MU1_PERIOD, rel=1e-6)
