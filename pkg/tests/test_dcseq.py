import math

import numpy as np
import pytest

from src.errors import InvalidSequenceError, SequenceRangeError
from src.schemas import SequenceSpec
from src.sequences.dcseq import (
    DCSequence,
    LogGrid,
    check_regularity,
    h_function,
    kappa_estimate,
    legendre_recover,
    power_sequence,
    seq_value,
)


def test_gevrey_values_are_exact_factorials(gevrey1):
    assert gevrey1.is_exact
    assert gevrey1.exact_value(5) == 120
    assert seq_value(gevrey1, 0) == 1
    assert gevrey1.j_max == 48


def test_gevrey_two_squares_factorials():
    seq = DCSequence.gevrey(2.0, j_max=10)
    assert seq.exact_value(4) == 24 ** 2


def test_fractional_gevrey_is_float_only():
    seq = DCSequence.gevrey(0.5, j_max=12)
    assert not seq.is_exact
    assert float(seq.values[4]) == pytest.approx(math.sqrt(24.0))


def test_gevrey_log_values():
    seq = DCSequence.gevrey_log(1.0, 1.0, j_max=10)
    expected = math.factorial(3) * math.log(3 + math.e) ** 3
    assert float(seq.values[3]) == pytest.approx(expected, rel=1e-12)


def test_index_outside_cache():
    seq = DCSequence.gevrey(1.0, j_max=10)
    with pytest.raises(SequenceRangeError):
        seq_value(seq, 11)


def test_spec_round_trip(gevrey1):
    spec = SequenceSpec.model_validate_json(gevrey1.to_spec().model_dump_json())
    assert DCSequence.from_spec(spec).values == gevrey1.values


@pytest.mark.parametrize("seq", [DCSequence.gevrey(1.0), DCSequence.gevrey_log(1.0, 1.0)])
def test_regularity_certificates_pass(seq):
    report = check_regularity(seq)
    assert report.normalized and report.increasing
    assert report.log_convex and report.superadditive
    assert math.isfinite(report.moderate_growth_A)
    assert not report.short_range


def test_gevrey_moderate_growth_constant(gevrey1):
    # (j + k)! <= 2^(j + k) j! k!
    report = check_regularity(gevrey1)
    assert 1.0 <= report.moderate_growth_A <= 2.0 + 1e-9


def test_nonconvex_explicit_sequence_is_rejected():
    report = check_regularity(DCSequence.explicit([1, 1, 3, 4, 20, 30, 200, 300, 3000]))
    assert not report.log_convex


def test_decreasing_explicit_sequence_raises():
    with pytest.raises(InvalidSequenceError):
        check_regularity(DCSequence.explicit([1, 2, 1.5, 4]))


def test_short_explicit_sequence_is_flagged():
    report = check_regularity(DCSequence.explicit([1, 1, 2, 6, 24]))
    assert report.short_range
    assert report.log_convex


def test_explicit_needs_unit_start():
    with pytest.raises(InvalidSequenceError):
        DCSequence.explicit([2, 3, 4])


def test_h_function_at_known_points(gevrey1):
    assert h_function(gevrey1, 0.0) == 0
    assert h_function(gevrey1, 2.0) == 1
    # inf_j j! / 4^j is attained at j = 3 and j = 4
    assert float(h_function(gevrey1, 0.25)) == pytest.approx(6 / 64)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_legendre_round_trip(alpha):
    seq = DCSequence.gevrey(alpha)
    for j in range(13):
        recovered = legendre_recover(seq, j)
        assert abs(float(recovered / seq.values[j]) - 1.0) <= 1e-3


def test_legendre_on_custom_grid(gevrey1):
    recovered = legendre_recover(gevrey1, 2, LogGrid(t_min=1e-2, t_max=1.0, n=2000))
    assert float(recovered) == pytest.approx(2.0, rel=1e-3)


def test_power_sequence_sandwich(gevrey1):
    result = power_sequence(gevrey1, 2.0)
    assert result.sequence.generator == "power"
    assert result.sequence.exact_value(3) == 36
    assert result.a1 <= result.a2
    assert result.limited
    assert result.checked_up_to == 24


def test_power_sequence_needs_s_at_least_one(gevrey1):
    with pytest.raises(ValueError):
        power_sequence(gevrey1, 0.5)


def test_kappa_estimate_identity_power(gevrey1):
    estimate = kappa_estimate(gevrey1, 1.0)
    assert estimate.kappa == pytest.approx(1.0)


def test_kappa_estimate_square(gevrey1):
    estimate = kappa_estimate(gevrey1, 2.0)
    assert estimate.kappa >= 1.0
    assert estimate.n > 0
    assert estimate.t_min < estimate.t_max


@pytest.mark.parametrize("seq", [DCSequence.gevrey(1.0), DCSequence.gevrey_log(1.0, 1.0)])
def test_h_function_is_nondecreasing(seq):
    values = [h_function(seq, t) for t in np.geomspace(1e-4, 2.0, 200)]
    assert all(a <= b for a, b in zip(values, values[1:]))
    assert values[-1] == 1


def test_power_sequence_keeps_regularity(gevrey1):
    report = check_regularity(power_sequence(gevrey1, 2.0).sequence)
    assert report.increasing and report.log_convex
    assert math.isfinite(report.moderate_growth_A)
