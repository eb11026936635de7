import math

import pytest

from src.division.gevrey import derivative_stream, gevrey_fit, log_abs
from src.errors import UndefinedFitError
from fractions import Fraction


def test_derivative_stream():
    assert derivative_stream([1, 1, 1, 1]) == [1, 1, 2, 6]


def test_log_abs_of_huge_fraction():
    value = Fraction(math.factorial(300), 7)
    assert log_abs(value) == pytest.approx(math.lgamma(301) - math.log(7), rel=1e-12)


@pytest.mark.parametrize("alpha", [1.0, 2.0])
def test_gevrey_index_recovered(alpha):
    stream = [math.factorial(l) ** int(alpha + 1) for l in range(41)]
    fit = gevrey_fit(stream)
    assert fit.alpha_hat == pytest.approx(alpha, abs=0.1)
    assert fit.fit_window == (20, 40)
    assert not fit.window_shrunk


def test_geometric_stream_has_index_zero():
    fit = gevrey_fit(derivative_stream([3 ** l for l in range(30)]))
    assert fit.alpha_hat == pytest.approx(0.0, abs=1e-6)
    assert fit.c == pytest.approx(math.log(3), abs=1e-6)


def test_zero_coefficients_shrink_window():
    stream = [math.factorial(l) ** 2 if l % 2 == 0 else 0 for l in range(41)]
    fit = gevrey_fit(stream)
    assert fit.window_shrunk
    assert all(l % 2 == 0 for l in fit.indices)


def test_all_zero_stream():
    with pytest.raises(UndefinedFitError):
        gevrey_fit([0] * 20)


def test_too_few_points():
    with pytest.raises(UndefinedFitError):
        gevrey_fit([1, 2, 3])
