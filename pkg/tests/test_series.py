from fractions import Fraction

import mpmath
import pytest

from src.division.series import PowerSeries2, combine_remainders, translate_x
from src.schemas import SeriesSpec


def test_terms_beyond_order_and_zeros_are_dropped():
    s = PowerSeries2(1, 3, {(0, (0,)): 1, (2, (2,)): 5, (1, (1,)): 0})
    assert len(s) == 1
    assert s[(2, (2,))] == 0


def test_wrong_parameter_dimension():
    with pytest.raises(ValueError):
        PowerSeries2(2, 3, {(0, (1,)): 1})


def test_product_truncates_at_common_order():
    one_plus_x = PowerSeries2.from_x_coeffs([1, 1], 1, 4)
    one_minus_x = PowerSeries2.from_x_coeffs([1, -1], 1, 4)
    assert one_plus_x * one_minus_x == PowerSeries2.from_x_coeffs([1, 0, -1], 1, 4)


def test_split(mixed_series):
    q, r = mixed_series.split(2)
    assert q.N == 6
    assert q[(1, (0,))] == -2
    assert q[(3, (2,))] == 7
    assert q[(0, (3,))] == Fraction(5, 3)
    assert [rj.N for rj in r] == [8, 7]
    assert r[1][(0, (1,))] == Fraction(1, 2)


def test_combine_remainders_inverts_split(mixed_series):
    q, r = mixed_series.split(2)
    rebuilt = q.with_order(8).shift_x(2) + combine_remainders(r, 8)
    assert rebuilt == mixed_series


def test_translate_x_binomial():
    x_squared = PowerSeries2(1, 4, {(2, (0,)): 1})
    shifted = translate_x(x_squared, 1)
    assert dict(shifted.items()) == {(0, (2,)): 1, (1, (1,)): 2, (2, (0,)): 1}
    assert shifted.translate_x(-1) == x_squared


def test_streams(mixed_series):
    assert mixed_series.x_stream()[:4] == [1, 0, 0, -2]
    assert mixed_series.t_stream(2)[3] == Fraction(5, 3)
    assert mixed_series.depends_on_t() and mixed_series.depends_on_x()


def test_shift_t():
    s = PowerSeries2.from_x_coeffs([1, 1], 1, 3).shift_t(2)
    assert dict(s.items()) == {(0, (2,)): 1, (1, (2,)): 1}


def test_float_mode_uses_mpf():
    s = PowerSeries2.from_x_coeffs([Fraction(1, 3)], 1, 2, mode="float")
    assert isinstance(s[(0, (0,))], mpmath.mpf)
    with pytest.raises(ValueError):
        s + PowerSeries2.from_x_coeffs([1], 1, 2)


def test_exact_mode_rejects_mpf():
    with pytest.raises(TypeError):
        PowerSeries2(1, 2, {(0, (0,)): mpmath.mpf("0.5")})


def test_spec_json(mixed_series):
    spec = SeriesSpec.model_validate_json(mixed_series.to_spec().model_dump_json())
    assert spec.terms[0].k == 0
    assert PowerSeries2.from_spec(spec) == mixed_series


def test_float_spec_keeps_precision():
    s = PowerSeries2.from_x_coeffs([Fraction(1, 3)], 1, 1, mode="float")
    again = PowerSeries2.from_spec(s.to_spec())
    with mpmath.workdps(40):
        assert abs(again[(0, (0,))] - mpmath.mpf(1) / 3) < mpmath.mpf(10) ** -30
