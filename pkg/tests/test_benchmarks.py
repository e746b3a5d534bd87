import numpy as np
import pytest

from hybrel.benchmarks import (
    CASE_KEYS,
    case_cantilever_tube,
    case_crank_slider,
    case_linear,
    get_case,
    run_case,
)
from hybrel.config import RunSettings
from hybrel.errors import InvalidGeometryError, InvalidParameterError
from hybrel.mcs import estimate_failure


class TestRegistry:
    def test_keys(self):
        assert set(CASE_KEYS) == {"linear", "crank_slider", "cantilever_tube"}

    def test_get_case_dispatch(self):
        assert get_case("linear", m=3, n=2).m == 3
        assert get_case("crank_slider", t=10.0).problem.name == "crank_slider(t=10)"
        assert get_case("cantilever_tube").n == 6

    def test_unknown_case(self):
        with pytest.raises(InvalidParameterError):
            get_case("bridge")

    def test_cantilever_rejects_params(self):
        with pytest.raises(InvalidParameterError):
            get_case("cantilever_tube", t=1.0)

    def test_linear_validation(self):
        with pytest.raises(InvalidParameterError):
            case_linear(0, 5)
        with pytest.raises(InvalidParameterError):
            case_linear(1, 0)

    def test_crank_time_range(self):
        with pytest.raises(InvalidParameterError):
            case_crank_slider(50.0)


class TestLinearCase:
    def test_batch_matches_scalar(self):
        case = case_linear(3, 2)
        x = np.array([0.1, -0.2, 0.5])
        y = np.array([0.3, -0.4])
        scalar = case.problem.lsf(x, y)
        batch = case.problem.lsf_batch(x[None, :], y[None, :])
        assert scalar == pytest.approx(batch[0], abs=1e-15)

    def test_reference_attached_for_table_rows(self):
        case = case_linear(5, 5)
        assert case.reference["failure_interval"] == (1.441e-4, 3.174e-4)


class TestCrankSlider:
    def test_geometry_error(self):
        case = case_crank_slider(0.0)
        x = np.array([10.0, 20.0, 1.98])
        bad = np.array([100.0, 150.0, 250.0, 125.0])  # b - a = 50 < e
        with pytest.raises(InvalidGeometryError):
            case.problem.lsf(x, bad)

    def test_nominal_is_safe(self):
        case = case_crank_slider(0.0)
        x = np.array([10.0, 20.0, 1.98])
        y = np.array([100.0, 300.0, 250.0, 125.0])
        assert case.problem.lsf(x, y) > 0.0

    def test_mcs_reproduces_calibration_target(self):
        # the stress scale was fixed against the reported t=0 level 0.06873
        case = case_crank_slider(0.0)
        est = estimate_failure(case.problem, samples=200_000, seed=0)
        assert est.p_hat == pytest.approx(0.06873, abs=0.004)

    def test_failure_grows_with_time(self):
        p0 = estimate_failure(case_crank_slider(0.0).problem,
                              samples=100_000, seed=1).p_hat
        p40 = estimate_failure(case_crank_slider(40.0).problem,
                               samples=100_000, seed=1).p_hat
        assert p40 > p0


class TestCantileverTube:
    def test_nominal_is_safe(self):
        case = case_cantilever_tube()
        x = np.array([5.0, 42.0, 120.0, 60.0, 185.0, 0.0])
        y = np.array([5.0, 10.0, 13.0, 13.0, 22.0, 90.0])
        assert case.problem.lsf(x, y) > 0.0

    def test_batch_matches_scalar(self):
        case = case_cantilever_tube()
        rng = np.random.default_rng(1)
        x = np.array([5.0, 42.0, 120.0, 60.0, 185.0, 0.0]) + rng.normal(0, 0.01, 6)
        y = np.array([5.0, 10.0, 13.0, 13.0, 22.0, 90.0])
        scalar = case.problem.lsf(x, y)
        batch = case.problem.lsf_batch(np.tile(x, (3, 1)), np.tile(y, (3, 1)))
        assert np.allclose(batch, scalar)


class TestRunCase:
    def test_reports_are_consistent(self):
        report = run_case(case_linear(2, 1))
        assert report.case == "linear"
        assert (report.m, report.n) == (2, 1)
        assert 0.0 <= report.F_lo <= report.F_hi <= 1.0
        assert report.F_lo + report.R_hi == 1.0
        assert report.F_hi + report.R_lo == 1.0
        assert len(report.curve) == 21
        assert report.converged
        assert report.runtime_ms is None

    def test_alpha_levels_setting(self):
        report = run_case(case_linear(2, 1), RunSettings(alpha_levels=7))
        assert len(report.curve) == 7

    def test_timing_opt_in(self):
        report = run_case(case_linear(2, 1), include_timing=True)
        assert report.runtime_ms is not None and report.runtime_ms > 0

    def test_mcs_attachment(self):
        case = case_linear(2, 1)
        est = estimate_failure(case.problem, samples=10_000, seed=0)
        report = run_case(case, mcs_estimate=est)
        assert report.mcs_p == est.p_hat
        assert report.mcs_ci_lo == est.ci_lo

    def test_linear_anchor_values(self):
        report = run_case(case_linear(9, 1))
        assert report.beta == pytest.approx(np.sqrt(10), abs=1e-6)
        assert report.d == pytest.approx(np.sqrt(10), abs=1e-6)

    def test_linear_two_random_closed_form(self):
        # F = Pr{u1 + u2 >= 2} = normal_cdf(-sqrt(2))
        from hybrel.distributions import normal_cdf
        report = run_case(case_linear(2, 0))
        assert report.F_lo == report.F_hi
        assert report.F_lo == pytest.approx(normal_cdf(-np.sqrt(2)), abs=1e-6)

    def test_design_point_stays_in_box(self):
        from hybrel.model import standardize
        from hybrel.solver import find_design_point
        for case in (case_linear(3, 2), case_crank_slider(0.0)):
            dp = find_design_point(standardize(case.problem))
            assert np.all(np.abs(dp.delta_star) <= 1.0 + 1e-12)

    @pytest.mark.parametrize("key,params", [
        ("linear", {"m": 5, "n": 5}),
        ("crank_slider", {"t": 0.0}),
        ("cantilever_tube", {}),
    ])
    def test_all_cases_run_end_to_end(self, key, params):
        report = run_case(get_case(key, **params))
        assert report.converged
        assert 0.0 < report.F_lo <= report.F_hi < 1.0
