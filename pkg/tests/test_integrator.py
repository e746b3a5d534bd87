import math

import numpy as np
import pytest

from hybrel.distributions import LinearUncertain, normal_cdf
from hybrel.errors import InvalidParameterError
from hybrel.integrator import (
    ReliabilityInterval,
    ShiftSchedule,
    reliability_at_shift,
    reliability_interval,
)
from hybrel.polar import ReducedLSF


def _reduced(offset, m, n, grad_norm=1.0):
    direction = np.zeros(max(m + n, 1))
    direction[0] = 1.0
    return ReducedLSF(offset=offset, grad_norm=grad_norm, m=m, n=n,
                      direction=direction)


class TestShiftSchedule:
    def test_default_uniform(self):
        schedule = ShiftSchedule.uniform(5)
        assert len(schedule.shifts) == 21
        assert schedule.shifts[0] == 0.0
        assert schedule.shifts[-1] == 5.0
        assert all(b >= a for a, b in zip(schedule.shifts, schedule.shifts[1:]))

    def test_collapses_without_uncertains(self):
        schedule = ShiftSchedule.uniform(0)
        assert schedule.shifts == (0.0,)

    def test_custom_distribution(self):
        schedule = ShiftSchedule.uniform(4, levels=5, dist=LinearUncertain(0.0, 4.0))
        assert schedule.shifts == (0.0, 1.0, 2.0, 3.0, 4.0)

    def test_validation(self):
        with pytest.raises(InvalidParameterError):
            ShiftSchedule(levels=(0.0, 1.0), shifts=(1.0,))
        with pytest.raises(InvalidParameterError):
            ShiftSchedule(levels=(0.0, 1.0), shifts=(2.0, 1.0))
        with pytest.raises(InvalidParameterError):
            ShiftSchedule.uniform(-1)


class TestReliabilityAtShift:
    def test_gaussian_tail_exactness(self):
        # rotational symmetry of the standard Gaussian makes the linear
        # pure-random case exact: the mass equals normal_cdf(offset)
        for m in (2, 5, 10):
            for offset in (1.0, 2.0, 3.0):
                value = reliability_at_shift(_reduced(offset, m, 0), 0.0)
                assert value == pytest.approx(normal_cdf(offset), abs=1e-3)
                assert value == pytest.approx(normal_cdf(offset), abs=1e-8)

    def test_zero_offset_is_half(self):
        # exact up to the 1e-10 radius truncation
        for m, shift in ((2, 0.0), (2, 1.0), (5, 0.5), (9, 3.0)):
            value = reliability_at_shift(_reduced(0.0, m, 3), shift)
            assert value == pytest.approx(0.5, abs=1e-10)

    def test_large_offset_saturates(self):
        value = reliability_at_shift(_reduced(50.0, 2, 0), 0.0)
        assert value >= 1.0 - 1e-9

    def test_negative_offset_complements(self):
        # both sides drop the same truncated radius tail, so the pair sums
        # to one within twice the truncation mass
        up = reliability_at_shift(_reduced(2.0, 4, 2), 1.0)
        down = reliability_at_shift(_reduced(-2.0, 4, 2), 1.0)
        assert up + down == pytest.approx(1.0, abs=5e-10)

    def test_one_dimensional_special_case(self):
        value = reliability_at_shift(_reduced(1.7, 1, 0), 0.0)
        assert value == pytest.approx(normal_cdf(1.7), abs=1e-12)

    def test_monotone_decreasing_for_positive_offset(self):
        reduced = _reduced(2.5, 4, 3)
        shifts = np.linspace(0.0, 3.0, 13)
        values = [reliability_at_shift(reduced, s) for s in shifts]
        assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))

    def test_monotone_increasing_for_negative_offset(self):
        reduced = _reduced(-2.5, 4, 3)
        shifts = np.linspace(0.0, 3.0, 13)
        values = [reliability_at_shift(reduced, s) for s in shifts]
        assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))

    def test_node_doubling_stability(self):
        for offset, m, n, shift in [
            (math.sqrt(10), 9, 1, 0.5),
            (2.0, 5, 5, 2.0),
            (1.0, 2, 3, 1.5),
            (3.0, 2, 0, 0.0),
            (-1.0, 3, 2, 1.0),
        ]:
            reduced = _reduced(offset, m, n)
            a = reliability_at_shift(reduced, shift, quad_nodes=64)
            b = reliability_at_shift(reduced, shift, quad_nodes=128)
            assert abs(a - b) < 1e-6

    def test_verify_contract(self):
        value = reliability_at_shift(_reduced(2.0, 5, 5), 1.0, verify=True)
        assert 0.9 < value < 1.0

    def test_parameter_validation(self):
        with pytest.raises(InvalidParameterError):
            reliability_at_shift(_reduced(1.0, 2, 0), -0.5)
        with pytest.raises(InvalidParameterError):
            reliability_at_shift(_reduced(1.0, 2, 0), 0.0, quad_nodes=16)
        with pytest.raises(InvalidParameterError):
            reliability_at_shift(_reduced(1.0, 0, 2), 0.0)


class TestReliabilityInterval:
    def test_point_interval_without_uncertains(self):
        reduced = _reduced(2.0, 3, 0)
        interval = reliability_interval(reduced)
        assert interval.r_lo == interval.r_hi
        assert interval.r_lo == pytest.approx(
            reliability_at_shift(reduced, 0.0), abs=1e-15
        )

    def test_envelope_attained_by_curve(self):
        reduced = _reduced(2.0, 5, 4)
        interval = reliability_interval(reduced)
        values = [r for _s, r in interval.curve]
        assert interval.r_lo == min(values)
        assert interval.r_hi == max(values)
        assert len(interval.curve) == 21

    def test_failure_complement_exact(self):
        reduced = _reduced(1.5, 4, 2)
        interval = reliability_interval(reduced)
        assert interval.f_lo + interval.r_hi == 1.0
        assert interval.f_hi + interval.r_lo == 1.0

    def test_monotone_curve_endpoints(self):
        # positive offset: R decreasing in the shift, so the envelope ends
        # sit at the schedule endpoints
        reduced = _reduced(2.5, 6, 3)
        interval = reliability_interval(reduced)
        assert interval.r_hi == interval.curve[0][1]
        assert interval.r_lo == interval.curve[-1][1]

    def test_thread_cap_matches_sequential(self):
        reduced = _reduced(2.0, 5, 4)
        seq = reliability_interval(reduced, thread_cap=1)
        par = reliability_interval(reduced, thread_cap=4)
        assert seq.curve == par.curve

    def test_interval_validation(self):
        with pytest.raises(InvalidParameterError):
            ReliabilityInterval(r_lo=0.8, r_hi=0.4, curve=())
