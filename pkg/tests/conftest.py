"""Shared fixtures for the weierdiv test suite."""

from fractions import Fraction
from pathlib import Path

import pytest

from src.division.series import PowerSeries2
from src.geometry.rootgeom import calibrate_domain
from src.poly.parampoly import ParamPoly
from src.sequences.dcseq import DCSequence

DATA_DIR = Path(__file__).resolve().parents[1] / "data"


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def gevrey1() -> DCSequence:
    return DCSequence.gevrey(1.0, j_max=48)


@pytest.fixture
def cusp() -> ParamPoly:
    """x^3 - t^2."""
    return ParamPoly.from_expr("x**3 - t**2")


@pytest.fixture
def quartic() -> ParamPoly:
    """x^4 - t^2."""
    return ParamPoly.from_expr("x**4 - t**2")


@pytest.fixture
def circle() -> ParamPoly:
    """x^2 + t^2: Gamma lies on the imaginary axis."""
    return ParamPoly.from_expr("x**2 + t**2")


@pytest.fixture
def tangent_parabolas() -> ParamPoly:
    return ParamPoly.from_expr("x**2 - 2*t*x + t**2 + t**4")


@pytest.fixture
def cone() -> ParamPoly:
    return ParamPoly.from_expr("x**2 - (t1**2 + t2**2)", m=2)


@pytest.fixture
def overlap() -> ParamPoly:
    return ParamPoly.from_expr("x**2 - 2*t1*x + t1**2 + t2**2", m=2)


@pytest.fixture
def domain_of():
    def build(P, eta=0.5):
        return calibrate_domain(P, eta)

    return build


@pytest.fixture
def geometric_series() -> PowerSeries2:
    """sum_{k <= 10} x^k at N = 12."""
    return PowerSeries2.from_x_coeffs([1] * 11, 1, 12)


@pytest.fixture
def mixed_series() -> PowerSeries2:
    return PowerSeries2(
        1,
        8,
        {
            (0, (0,)): 1,
            (1, (1,)): Fraction(1, 2),
            (3, (0,)): -2,
            (2, (3,)): Fraction(5, 3),
            (5, (2,)): 7,
        },
    )
