import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hybrel.errors import (
    DegenerateGradientError,
    InvalidParameterError,
    UndefinedAngleError,
)
from hybrel.model import HybridProblem, RandomVariable, UncertainVariable, standardize
from hybrel.polar import ReducedLSF, polar_features, reduce_to_polar
from hybrel.solver import DesignPoint, find_design_point


def _std_linear(m, n, coeffs=None, constant=1.0):
    total = m + n
    coeffs = np.full(total, -1.0 / total) if coeffs is None else np.asarray(coeffs)

    def lsf(x, y):
        w = np.concatenate([np.asarray(x, float), np.asarray(y, float)])
        return constant + float(coeffs @ w)

    problem = HybridProblem(
        lsf=lsf,
        randoms=tuple(RandomVariable(f"u{i}", 0.0, 1.0) for i in range(m)),
        uncertains=tuple(UncertainVariable(f"y{j}", -1.0, 1.0) for j in range(n)),
    )
    return standardize(problem)


def _design_point(u, delta):
    u = np.asarray(u, float)
    delta = np.asarray(delta, float)
    return DesignPoint(
        u_star=u,
        delta_star=delta,
        beta=float(np.linalg.norm(np.concatenate([u, delta]))),
        iterations=1,
        converged=True,
    )


class TestPolarFeatures:
    def test_collinear(self):
        direction = np.array([1.0, 0.0, 0.0])
        feats = polar_features(2 * direction, direction, 2, 1)
        assert feats.cosine == pytest.approx(1.0, abs=1e-15)
        assert feats.radius == pytest.approx(2.0, abs=1e-15)

    def test_orthogonal(self):
        direction = np.array([1.0, 0.0])
        feats = polar_features(np.array([0.0, 3.0]), direction, 1, 1)
        assert feats.cosine == pytest.approx(0.0, abs=1e-15)

    def test_hand_computed_example(self):
        feats = polar_features(
            np.array([3.0, 4.0, 0.0]), np.array([1.0, 0.0, 0.0]), 2, 1
        )
        assert feats.radius == pytest.approx(5.0, abs=1e-12)
        assert feats.cosine == pytest.approx(0.6, abs=1e-12)
        assert feats.random_sq == pytest.approx(25.0, abs=1e-12)
        assert feats.uncertain_sq == pytest.approx(0.0, abs=1e-12)

    def test_origin_rejected(self):
        with pytest.raises(UndefinedAngleError):
            polar_features(np.zeros(3), np.array([1.0, 0.0, 0.0]), 2, 1)

    def test_non_unit_direction_rejected(self):
        with pytest.raises(InvalidParameterError):
            polar_features(np.ones(2), np.array([1.0, 1.0]), 1, 1)

    @given(
        arrays(np.float64, 5, elements=st.floats(-10, 10)).filter(
            lambda w: np.linalg.norm(w) > 1e-6
        )
    )
    def test_radius_splits_into_parts(self, omega):
        direction = np.zeros(5)
        direction[0] = 1.0
        feats = polar_features(omega, direction, 3, 2)
        assert feats.radius ** 2 == pytest.approx(
            feats.random_sq + feats.uncertain_sq, rel=1e-12, abs=1e-12
        )
        assert -1.0 <= feats.cosine <= 1.0
        assert 0.0 <= feats.uncertain_sq <= 2.0 * (10.0 ** 2)


class TestReduce:
    def test_single_variable_linear(self):
        std = _std_linear(1, 0, coeffs=[-1.0], constant=3.0)
        reduced = reduce_to_polar(std, _design_point([3.0], []))
        assert reduced.grad_norm == pytest.approx(1.0, rel=1e-6)
        assert reduced.offset == pytest.approx(3.0, rel=1e-9)

    def test_ten_variable_linear_hand_value(self):
        std = _std_linear(5, 5)
        point = _design_point(np.ones(5), np.ones(5))
        reduced = reduce_to_polar(std, point)
        assert reduced.grad_norm == pytest.approx(1 / math.sqrt(10), rel=1e-7)
        assert reduced.offset == pytest.approx(math.sqrt(10), abs=1e-9)

    def test_linear_exactness_at_random_points(self):
        std = _std_linear(3, 2, coeffs=[0.5, -1.0, 0.25, 2.0, -0.75],
                          constant=0.8)
        point = _design_point([0.1, 0.2, -0.3], [0.4, -0.5])
        with pytest.warns(RuntimeWarning):
            reduced = reduce_to_polar(std, point)  # arbitrary point, warns
        rng = np.random.default_rng(3)
        for _ in range(100):
            omega = rng.normal(size=5)
            assert reduced.at_point(omega) == pytest.approx(
                std.lsf_omega(omega), rel=1e-9, abs=1e-9
            )

    def test_sign_classification_matches_plane(self):
        std = _std_linear(2, 1, coeffs=[-0.3, -0.3, -0.4], constant=1.0)
        point = _design_point([1.0, 1.0], [1.0])
        reduced = reduce_to_polar(std, point)
        rng = np.random.default_rng(4)
        points = rng.normal(size=(10_000, 3))
        for omega in points:
            assert (reduced.at_point(omega) > 0) == (std.lsf_omega(omega) > 0)

    def test_rotation_invariance(self):
        # rotate the Gaussian subspace of problem and design point together
        rng = np.random.default_rng(5)
        coeffs = np.array([0.7, -0.4, 0.2, -0.9])
        q, _ = np.linalg.qr(rng.normal(size=(3, 3)))

        def make_std(rotation):
            def lsf(x, y):
                xr = rotation.T @ np.asarray(x, float)
                w = np.concatenate([xr, np.asarray(y, float)])
                return 2.0 + float(coeffs @ w)

            problem = HybridProblem(
                lsf=lsf,
                randoms=tuple(RandomVariable(f"u{i}", 0.0, 1.0) for i in range(3)),
                uncertains=(UncertainVariable("y", -1.0, 1.0),),
            )
            return standardize(problem)

        base = make_std(np.eye(3))
        rotated = make_std(q)
        u = np.array([0.3, -0.2, 0.5])
        delta = np.array([0.1])
        import warnings
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            red_base = reduce_to_polar(base, _design_point(u, delta))
            red_rot = reduce_to_polar(rotated, _design_point(q @ u, delta))
        assert red_rot.offset == pytest.approx(red_base.offset, abs=1e-9)
        assert red_rot.grad_norm == pytest.approx(red_base.grad_norm, abs=1e-9)

    def test_degenerate_gradient(self):
        std = _std_linear(1, 0, coeffs=[0.0], constant=1.0)
        with pytest.raises(DegenerateGradientError):
            reduce_to_polar(std, _design_point([1.0], []))

    def test_reduced_lsf_validation(self):
        with pytest.raises(InvalidParameterError):
            ReducedLSF(offset=1.0, grad_norm=0.0, m=1, n=0,
                       direction=np.array([1.0]))
        with pytest.raises(InvalidParameterError):
            ReducedLSF(offset=1.0, grad_norm=1.0, m=1, n=1,
                       direction=np.array([1.0, 1.0]))

    def test_surrogate_scaling(self):
        reduced = ReducedLSF(offset=2.0, grad_norm=0.5, m=2, n=1,
                             direction=np.array([1.0, 0.0, 0.0]))
        # surrogate = grad_norm * margin
        assert reduced.surrogate(4.0, 0.0, -0.5) == pytest.approx(
            0.5 * (2.0 + 2.0 * -0.5)
        )
        assert reduced.safe_margin(4.0, 0.0, -0.5) == pytest.approx(1.0)

    def test_true_design_point_is_collinear(self):
        # a converged solve does not warn
        import warnings
        std = _std_linear(2, 0, coeffs=[-0.6, -0.8], constant=2.0)
        design = find_design_point(std)
        with warnings.catch_warnings():
            warnings.simplefilter("error", RuntimeWarning)
            reduced = reduce_to_polar(std, design)
        assert reduced.offset == pytest.approx(2.0, abs=1e-6)
