"""
Unit tests for sampled curves, horizontal lifts and the vertical connector.
"""
import math

import numpy as np
import pytest

from hqgeo.algebra.quaternion import PureQuaternion, Quaternion
from hqgeo.group.frame import horizontality_residual
from hqgeo.group.heisenberg import HeisPoint, compose
from hqgeo.group.sampling import random_point
from hqgeo.paths.curve import SampledCurve
from hqgeo.paths.horizontal import (
    VerticalConnectorPlan,
    bilinear_relations,
    connect,
    horizontal_lift,
    length_cc,
    solve_vertical_coeffs,
    vertical_connector,
)
from hqgeo.utils.exceptions import InputError


VERTICAL_TARGETS = [
    PureQuaternion(1.0, 0.0, 0.0),
    PureQuaternion(-2.5, 0.0, 0.0),
    PureQuaternion(0.0, 3.0, -1.0),
    PureQuaternion(0.7, -0.2, 1.9),
    PureQuaternion(-4.0, 1e-3, 2.0),
    PureQuaternion(1e-6, 1e-6, -1e-6),
]


def unit_circle(lam):
    angle = 2.0 * math.pi * np.asarray(lam)
    zeros = np.zeros_like(angle)
    return np.stack([np.cos(angle), np.sin(angle), zeros, zeros], axis=-1)


def unit_circle_velocity(lam):
    angle = 2.0 * math.pi * np.asarray(lam)
    zeros = np.zeros_like(angle)
    return 2.0 * math.pi * np.stack([-np.sin(angle), np.cos(angle), zeros, zeros], axis=-1)


@pytest.mark.unit
class TestSampledCurve:
    def test_parameter_must_cover_unit_interval(self):
        with pytest.raises(InputError):
            SampledCurve(np.array([0.0, 0.5]), np.zeros((2, 7)))
        with pytest.raises(InputError):
            SampledCurve(np.array([0.0, 0.6, 0.4, 1.0]), np.zeros((4, 7)))

    def test_points_shape_checked(self):
        with pytest.raises(InputError):
            SampledCurve(np.array([0.0, 1.0]), np.zeros((2, 6)))

    def test_constant_curve(self):
        p = HeisPoint.from_array([1, 2, 3, 4, 5, 6, 7])
        curve = SampledCurve.constant(p)
        assert curve.start == p
        assert curve.end == p
        assert length_cc(curve) == 0.0

    def test_translate_keeps_horizontality(self, rng):
        curve = connect(HeisPoint.origin(), random_point(rng))
        g = random_point(rng)
        moved = curve.translate(g)
        assert moved.start.is_close(g, 1e-12)
        assert horizontality_residual(moved) <= 1e-8
        assert length_cc(moved) == pytest.approx(length_cc(curve), rel=1e-12)

    def test_dilate_scales_length(self, rng):
        curve = connect(HeisPoint.origin(), random_point(rng))
        assert length_cc(curve.dilate(3.0)) == pytest.approx(3.0 * length_cc(curve), rel=1e-12)


@pytest.mark.unit
class TestVerticalConnector:
    def test_zero_target(self):
        np.testing.assert_array_equal(solve_vertical_coeffs(PureQuaternion()), np.zeros(4))
        assert vertical_connector(PureQuaternion()).end.is_origin()

    @pytest.mark.parametrize("t", VERTICAL_TARGETS)
    def test_coefficients_meet_relations(self, t):
        k = solve_vertical_coeffs(t)
        np.testing.assert_allclose(bilinear_relations(k), -t.as_array() / 4.0, atol=1e-10)

    @pytest.mark.parametrize("t", VERTICAL_TARGETS)
    def test_plan_reaches_target(self, t):
        plan = VerticalConnectorPlan.from_coeffs(solve_vertical_coeffs(t))
        assert len(plan.points) == 9
        assert plan.target.is_close(HeisPoint(Quaternion(), t), 1e-10)

    @pytest.mark.parametrize("t", VERTICAL_TARGETS[:4])
    def test_connector_is_horizontal(self, t):
        curve = vertical_connector(t)
        assert curve.start.is_origin()
        assert curve.end.is_close(HeisPoint(Quaternion(), t), 1e-10)
        assert horizontality_residual(curve) <= 1e-8

    def test_connector_length_scales_with_root_of_target(self):
        base = length_cc(vertical_connector(PureQuaternion(0.3, -0.5, 0.8)))
        scaled = length_cc(vertical_connector(PureQuaternion(1.2, -2.0, 3.2)))
        assert scaled == pytest.approx(2.0 * base, rel=1e-6)


@pytest.mark.unit
class TestHorizontalLift:
    def test_circle_lift_gains_enclosed_area(self):
        start = HeisPoint(Quaternion(1.0, 0.0, 0.0, 0.0), PureQuaternion())
        curve = horizontal_lift(unit_circle, start, unit_circle_velocity, samples=513)
        assert curve.end.q.is_close(start.q, 1e-12)
        np.testing.assert_allclose(curve.end.t.as_array(), [-4.0 * math.pi, 0.0, 0.0], atol=1e-10)
        assert horizontality_residual(curve) <= 1e-10
        assert length_cc(curve) == pytest.approx(2.0 * math.pi, rel=1e-12)

    def test_lift_from_samples_uses_differences(self):
        start = HeisPoint(Quaternion(1.0, 0.0, 0.0, 0.0), PureQuaternion(0.0, 1.0, 0.0))
        samples = unit_circle(np.linspace(0.0, 1.0, 2001))
        curve = horizontal_lift(samples, start)
        np.testing.assert_allclose(curve.end.t.as_array(), [-4.0 * math.pi, 1.0, 0.0], atol=1e-3)

    def test_start_mismatch(self):
        with pytest.raises(InputError):
            horizontal_lift(unit_circle, HeisPoint.origin())


@pytest.mark.unit
class TestConnect:
    def test_same_point(self, rng):
        p = random_point(rng)
        curve = connect(p, p)
        assert curve.start == p
        assert curve.end == p

    def test_horizontal_target_is_a_straight_line(self):
        target = HeisPoint(Quaternion(0.6, 0.0, -0.8, 0.0), PureQuaternion())
        curve = connect(HeisPoint.origin(), target)
        assert curve.end.is_close(target, 1e-14)
        assert length_cc(curve) == pytest.approx(1.0, rel=1e-14)
        assert curve.boundaries == (0,)
        assert curve.end.t == target.t

    def test_lift_rounding_is_not_connected(self):
        start = HeisPoint(Quaternion(0.3, -0.2, 0.5, 0.1), PureQuaternion(1.0, 2.0, 3.0))
        step = Quaternion(-0.7, 0.4, 0.2, 1.1)
        target = compose(start, HeisPoint(step, PureQuaternion()))
        curve = connect(start, target)
        assert curve.boundaries == (0,)
        assert curve.end.t == target.t
        assert length_cc(curve) == pytest.approx(step.norm(), rel=1e-13)

    def test_small_genuine_gap_is_connected(self):
        target = HeisPoint(Quaternion(0.6, 0.0, -0.8, 0.0), PureQuaternion(1e-6, 0.0, 0.0))
        curve = connect(HeisPoint.origin(), target)
        assert len(curve.boundaries) > 1
        assert curve.end.is_close(target, 1e-9)
        assert horizontality_residual(curve) <= 1e-8

    def test_random_pairs(self, rng):
        for _ in range(20):
            a, b = random_point(rng), random_point(rng)
            curve = connect(a, b)
            assert curve.start.is_close(a, 1e-14)
            assert curve.end.is_close(b, 1e-9)
            assert horizontality_residual(curve) <= 1e-8

    def test_length_bounds_distance(self, rng):
        for _ in range(10):
            p = random_point(rng)
            curve = connect(HeisPoint.origin(), p)
            # any horizontal path is at least as long as the horizontal displacement
            assert length_cc(curve) >= p.q.norm() - 1e-12

    def test_connect_is_left_equivariant(self, rng):
        a, b, g = random_point(rng), random_point(rng), random_point(rng)
        direct = connect(compose(g, a), compose(g, b))
        assert direct.end.is_close(compose(g, b), 1e-9)
        assert direct.start.is_close(compose(g, a), 1e-14)
        assert horizontality_residual(direct) <= 1e-8
