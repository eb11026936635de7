import math

import numpy as np
import pytest

from src.errors import NearPoleError
from src.geometry.rootgeom import (
    calibrate_domain,
    dist_to_gamma,
    fiber,
    inv_p_derivative,
    is_hyperbolic,
    sample_gamma,
)
from src.poly.parampoly import ParamPoly


def test_calibration_keeps_eta_for_cusp(cusp):
    dom = calibrate_domain(cusp, 0.5)
    assert dom.delta == 0.5 and dom.admissible and not dom.trivial


def test_calibration_bypassed_for_pure_power():
    dom = calibrate_domain(ParamPoly.from_expr("x**3"), 0.5)
    assert dom.trivial


def test_calibration_rejects_nonpositive_eta(cusp):
    with pytest.raises(ValueError):
        calibrate_domain(cusp, 0.0)


def test_cloud_size_and_rows(cusp, domain_of):
    cloud = sample_gamma(cusp, domain_of(cusp), n_radial=40)
    assert len(cloud) == 3 * (1 + 2 * 40)
    assert cloud.header() == ["re", "im", "t", "branch_id"]
    assert len(cloud.rows()[0]) == 4


def test_cloud_is_deterministic_across_threads(quartic, domain_of):
    dom = domain_of(quartic)
    single = sample_gamma(quartic, dom, n_radial=30, threads=1)
    pooled = sample_gamma(quartic, dom, n_radial=30, threads=4)
    np.testing.assert_array_equal(single.z, pooled.z)


def test_hyperbolic_detection(circle, domain_of):
    square = ParamPoly.from_expr("x**2 - t**2")
    assert is_hyperbolic(sample_gamma(square, domain_of(square), n_radial=30))
    assert not is_hyperbolic(sample_gamma(circle, domain_of(circle), n_radial=30))


def test_cone_is_hyperbolic(cone, domain_of):
    cloud = sample_gamma(cone, domain_of(cone), n_radial=20, n_angular=8)
    assert is_hyperbolic(cloud)
    assert cloud.header() == ["re", "im", "t1", "t2", "branch_id"]


def test_distance_to_imaginary_segment(circle, domain_of):
    cloud = sample_gamma(circle, domain_of(circle))
    assert dist_to_gamma(cloud, 0.2) == pytest.approx(0.2, rel=1e-6)
    assert dist_to_gamma(cloud, 0.1 + 0.2j) == pytest.approx(0.1, rel=1e-6)


@pytest.mark.parametrize("d", [3, 4, 5])
def test_distance_between_rays(d, domain_of):
    P = ParamPoly.from_expr(f"x**{d} - t**2")
    dom = domain_of(P)
    cloud = sample_gamma(P, dom)
    r = 0.5 * dom.delta
    z = r * complex(math.cos(math.pi / d), math.sin(math.pi / d))
    assert dist_to_gamma(cloud, z) == pytest.approx(r * math.sin(math.pi / d), rel=1e-6)


@pytest.mark.parametrize("theta", [0.3, 1.1, 2.0, 4.4])
def test_fiber_closed_form(cusp, domain_of, theta):
    dom = domain_of(cusp)
    r = 0.2
    result = fiber(cusp, dom, r * complex(math.cos(theta), math.sin(theta)))
    assert result.method == "exact_poly" and not result.upper_bound
    assert result.rho == pytest.approx(r ** 1.5 * abs(math.sin(1.5 * theta)), rel=1e-9)


def test_fiber_on_gamma_is_zero(cusp, domain_of):
    assert fiber(cusp, domain_of(cusp), 0.1).rho == pytest.approx(0.0, abs=1e-14)


def test_fiber_outside_disc(cusp, domain_of):
    with pytest.raises(ValueError):
        fiber(cusp, domain_of(cusp), 0.9)


def test_fiber_two_parameters(cone, domain_of):
    result = fiber(cone, domain_of(cone), 0.1j)
    assert result.method == "grid_polish" and result.upper_bound
    assert result.rho == pytest.approx(0.1, rel=1e-3)


def test_inverse_derivatives(circle):
    assert inv_p_derivative(circle, 0.3, (0.1,), 0) == pytest.approx(10.0)
    assert inv_p_derivative(circle, 0.3, (0.1,), 1) == pytest.approx(-20.0)


def test_inverse_derivative_near_pole(circle):
    with pytest.raises(NearPoleError):
        inv_p_derivative(circle, 0.0, (0.0,), 1)


def test_inverse_second_derivative_on_imaginary_axis(circle):
    # 1/(t^2 - 1/4) has second derivative -2 / (1/4)^2 at t = 0
    assert inv_p_derivative(circle, 0.5j, (0.0,), 2) == pytest.approx(-32.0, rel=1e-12)


@pytest.mark.parametrize("p", [1, 2, 3])
@pytest.mark.parametrize("theta", [0.3, 1.1, 2.0, 4.4])
def test_fiber_closed_form_for_even_powers(p, theta, domain_of):
    P = ParamPoly.from_expr(f"x**2 + t**{2 * p}")
    dom = domain_of(P)
    r = 0.5 * dom.delta
    # tau^(2p) = -z^2
    phases = [(2 * theta + math.pi + 2 * math.pi * n) / (2 * p) for n in range(2 * p)]
    expected = r ** (1 / p) * min(abs(math.sin(phase)) for phase in phases)
    result = fiber(P, dom, r * complex(math.cos(theta), math.sin(theta)))
    assert result.rho == pytest.approx(expected, rel=1e-9)


def test_polynomial_bounded_below_by_distance_power(cusp, domain_of):
    dom = domain_of(cusp)
    cloud = sample_gamma(cusp, dom)
    rng = np.random.default_rng(2)
    for _ in range(12):
        z = dom.delta * rng.uniform(0.05, 0.95) * np.exp(2j * np.pi * rng.uniform())
        bound = dist_to_gamma(cloud, z) ** cusp.d
        for t in np.linspace(-dom.eta, dom.eta, 9):
            assert abs(cusp.value(z, (t,))) >= bound * (1 - 1e-9)
