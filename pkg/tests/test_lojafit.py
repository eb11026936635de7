import numpy as np
import pytest

from src.errors import InsufficientSamplingError, MisuseError, OverlapError
from src.geometry import lojafit
from src.geometry.lojafit import (
    check_assumptions,
    decompose_branches,
    estimate_sigma,
    inverse_growth_fit,
    lower_envelope,
    occupied_fraction,
    separation_exponent,
)
from src.geometry.rootgeom import calibrate_domain, sample_gamma
from src.poly.parampoly import ParamPoly

REAL_AXIS = np.linspace(-0.5, 0.5, 2001).astype(complex)
RADII = np.geomspace(1e-5, 0.5, 400)


def test_lower_envelope_takes_bin_minimum():
    stats = lower_envelope(np.array([0.0, 0.1, 1.0, 1.1]), np.array([5.0, 3.0, 2.0, 7.0]), bins=2)
    assert [(s.x, s.y, s.count) for s in stats] == [(0.1, 3.0, 2), (1.0, 2.0, 2)]


def test_lower_envelope_empty():
    assert lower_envelope(np.array([]), np.array([]), bins=4) == []


def test_separation_of_transversal_arc():
    assert separation_exponent(REAL_AXIS, 1j * RADII) == pytest.approx(1.0, abs=0.05)


def test_separation_of_tangent_parabola():
    assert separation_exponent(REAL_AXIS, RADII + 1j * RADII ** 2) == pytest.approx(2.0, abs=0.1)


def test_separation_detects_overlap():
    with pytest.raises(OverlapError):
        separation_exponent(REAL_AXIS, RADII.astype(complex))


def test_separation_needs_points():
    with pytest.raises(InsufficientSamplingError):
        separation_exponent(REAL_AXIS, np.array([], dtype=complex))


def test_occupied_fraction_extremes():
    rng = np.random.default_rng(0)
    cloud = rng.uniform(-1, 1, 20000) + 1j * rng.uniform(-1, 1, 20000)
    assert occupied_fraction(cloud, 1.0) > 0.9
    assert occupied_fraction(np.linspace(-1, 1, 500).astype(complex), 1.0) < 0.1


def test_decompose_cusp(cusp):
    dom = calibrate_domain(cusp, 0.5)
    decomposition = decompose_branches(sample_gamma(cusp, dom))
    assert len(decomposition) == 3
    assert decomposition.branches[0].is_real
    assert all(b.endpoint_ok for b in decomposition.branches)
    assert np.all(decomposition.cloud.branch_id >= 0)


def test_decompose_tangent_parabolas(tangent_parabolas):
    dom = calibrate_domain(tangent_parabolas, 0.5)
    decomposition = decompose_branches(sample_gamma(tangent_parabolas, dom))
    assert len(decomposition) == 5
    angles = [b.tangent_angle for b in decomposition.branches[1:]]
    assert angles == sorted(angles)


def test_decompose_refuses_complex_two_parameter_locus(overlap):
    dom = calibrate_domain(overlap, 0.5)
    with pytest.raises(MisuseError):
        decompose_branches(sample_gamma(overlap, dom, n_radial=20, n_angular=8))


@pytest.mark.parametrize(
    "text, m, expected",
    [
        ("x**3 - t**2", 1, "none"),
        ("x**2 + t**4", 1, "none"),
        ("x**2 - (t1**2 + t2**2)", 2, "none"),
        ("x**2 - 2*t1*x + t1**2 + t2**2", 2, "overlap_2d"),
        ("x**2 - 2*t*x + t**2 + t**4", 1, "tangential_contact"),
    ],
)
def test_assumption_classification(text, m, expected):
    P = ParamPoly.from_expr(text, m=m)
    report = check_assumptions(P, calibrate_domain(P, 0.5))
    assert report.failure_reason == expected
    assert report.passes == (expected == "none")


def test_tangential_contact_exponent(tangent_parabolas):
    report = check_assumptions(tangent_parabolas, calibrate_domain(tangent_parabolas, 0.5))
    worst = max(v for row in report.pairwise_mu for v in row if v is not None)
    assert worst == pytest.approx(2.0, abs=0.1)


def test_sigma_needs_nontrivial_polynomial():
    P = ParamPoly.from_expr("x**2")
    with pytest.raises(InsufficientSamplingError):
        estimate_sigma(P, calibrate_domain(P, 0.5))


@pytest.mark.slow
@pytest.mark.parametrize(
    "text, expected, tol",
    [
        ("x**2 + t**2", 1.0, 0.05),
        ("x**2 + t**4", 1.0, 0.05),
        ("x**3 - t**2", 1.5, 0.075),
        ("x**4 - t**2", 2.0, 0.1),
    ],
)
def test_sigma_recovered(text, expected, tol):
    P = ParamPoly.from_expr(text)
    estimate = estimate_sigma(P, calibrate_domain(P, 0.5), with_inverse_growth=False)
    assert estimate.sigma_hat == pytest.approx(expected, abs=tol)
    assert estimate.valid
    assert estimate.crude_bound == P.d
    assert sum(s.used for s in estimate.bin_stats) == min(12, len(estimate.bin_stats))


@pytest.mark.slow
def test_sigma_two_parameters(cone):
    estimate = estimate_sigma(cone, calibrate_domain(cone, 0.5), with_inverse_growth=False)
    assert estimate.sigma_hat == pytest.approx(1.0, abs=0.1)
    assert estimate.hyperbolic


@pytest.mark.parametrize("text, sigma", [("x**2 + t**2", 1.0), ("x**4 - t**2", 2.0)])
def test_inverse_growth_slope_bounded_by_sigma(text, sigma):
    P = ParamPoly.from_expr(text)
    dom = calibrate_domain(P, 0.5)
    growth = inverse_growth_fit(P, dom, sample_gamma(P, dom))
    assert growth.slope <= sigma + 0.15
    assert growth.n_points > 4


@pytest.mark.parametrize(
    "first, second",
    [
        (REAL_AXIS, 1j * RADII),
        (REAL_AXIS, RADII * np.exp(1j * np.pi / 4)),
    ],
)
def test_separation_is_symmetric(first, second):
    forward = separation_exponent(first, second)
    backward = separation_exponent(second, first)
    assert forward == pytest.approx(backward, abs=0.1)


def test_unfitted_pairs_are_reported(cusp, monkeypatch):
    def unfitted(branch_a, branch_b, bins=16):
        raise InsufficientSamplingError("too few points")

    monkeypatch.setattr(lojafit, "separation_exponent", unfitted)
    report = check_assumptions(cusp, calibrate_domain(cusp, 0.5))
    assert report.failure_reason == "none"
    assert len(report.unmeasured_pairs) == 6
    assert all(v is None for row in report.pairwise_mu for v in row)
    assert "not fitted" in report.detail


@pytest.mark.slow
@pytest.mark.parametrize("text", ["x**2 + t**2", "x**2 + t**4", "x**3 - t**2"])
def test_sigma_is_scale_consistent(text):
    P = ParamPoly.from_expr(text)
    dom = calibrate_domain(P, 0.5)
    cloud = sample_gamma(P, dom)
    full = estimate_sigma(P, dom, cloud, with_inverse_growth=False)
    shrunk = estimate_sigma(P, dom, cloud, radius_range=(1e-6, 0.1), with_inverse_growth=False)
    assert abs(full.sigma_hat - shrunk.sigma_hat) <= 0.1
