"""
Unit tests for CC geodesics, the CC distance and its comparison with the Koranyi gauge.
"""
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings

from hqgeo.algebra.quaternion import ONE, PureQuaternion, Quaternion, f_ratio, vers
from hqgeo.cc.metric import (
    CCGeodesic,
    cc_distance,
    cc_distance_origin,
    cc_geodesic_eval,
    cc_geodesic_through,
    cc_horizontality_residual,
    cc_sphere_points,
    cc_sphere_sample,
    comparison_ratio,
    comparison_ratio_sweep,
    gl_cc_deviation,
    ratio_factor,
    vertical_gain_oracle,
    x0_solve,
)
from hqgeo.group.heisenberg import HeisPoint, compose, dilate, koranyi_gauge
from hqgeo.group.sampling import random_point
from hqgeo.paths.horizontal import connect, length_cc
from hqgeo.utils.exceptions import DegenerateInputError, DomainError, ParameterError, SolverError
from tests.strategies import points


TEST_CIRCLE = CCGeodesic(PureQuaternion(2.0 * math.pi, 0.0, 0.0), ONE)


@pytest.mark.unit
class TestGeodesics:
    def test_b_must_be_unit(self):
        with pytest.raises(ParameterError):
            CCGeodesic(PureQuaternion(), Quaternion(2.0, 0.0, 0.0, 0.0))

    def test_straight_line(self):
        p = cc_geodesic_eval(PureQuaternion(), Quaternion(0.0, 1.0, 0.0, 0.0), 2.5)
        assert p.is_close(HeisPoint(Quaternion(0.0, 2.5, 0.0, 0.0), PureQuaternion()), 1e-15)

    def test_arc_limit(self):
        assert CCGeodesic(PureQuaternion(), ONE).arc_limit == math.inf
        assert TEST_CIRCLE.arc_limit == pytest.approx(1.0)

    def test_test_circle_closes(self):
        end = TEST_CIRCLE.eval(1.0)
        np.testing.assert_allclose(end.q.as_array(), 0.0, atol=1e-14)
        np.testing.assert_allclose(end.t.as_array(), [-1.0 / math.pi, 0.0, 0.0], atol=1e-14)

    def test_geodesics_are_horizontal(self):
        geodesic = CCGeodesic(PureQuaternion(1.0, -2.0, 0.5), Quaternion(0.5, 0.5, 0.5, 0.5))
        assert cc_horizontality_residual(geodesic, length=2.0) <= 1e-10

    def test_unit_speed(self):
        geodesic = CCGeodesic(PureQuaternion(0.3, 0.0, 4.0), Quaternion(0.0, 0.6, 0.0, 0.8))
        speeds = np.linalg.norm(geodesic.velocities(np.linspace(0.0, 1.0, 11))[:, :4], axis=1)
        np.testing.assert_allclose(speeds, 1.0, atol=1e-14)


@pytest.mark.unit
class TestVerticalCoefficient:
    def test_quadrature_agrees_with_corrected_form(self):
        integrated, closed = vertical_gain_oracle(TEST_CIRCLE)
        np.testing.assert_allclose(integrated, [-1.0 / math.pi, 0.0, 0.0], atol=1e-10)
        np.testing.assert_allclose(closed, integrated, atol=1e-10)

    def test_printed_form_is_twice_as_large(self):
        integrated, published = vertical_gain_oracle(TEST_CIRCLE, as_published=True)
        assert published[0] == pytest.approx(2.0 * integrated[0], rel=1e-9)


@pytest.mark.unit
class TestX0:
    def test_limits(self):
        assert x0_solve(math.inf) == 0.0
        assert x0_solve(0.0) == 2.0 * math.pi

    @pytest.mark.parametrize("ratio", [-1.0, math.nan])
    def test_bad_ratio(self, ratio):
        with pytest.raises(DomainError):
            x0_solve(ratio)

    @pytest.mark.parametrize("ratio", [1e-6, 0.1, 1.0, 10.0, 1e6])
    def test_root_solves_equation(self, ratio):
        x = x0_solve(ratio)
        assert 0.0 < x < 2.0 * math.pi
        assert vers(x) / (x * f_ratio(x)) == pytest.approx(ratio, rel=1e-9)

    @pytest.mark.parametrize("ratio", [5e-324, 1e-300, 1e-40, 1e-34, 1e-33])
    @pytest.mark.parametrize("published", [False, True])
    def test_ratios_below_pole_limit(self, ratio, published):
        assert x0_solve(ratio, published) == pytest.approx(2.0 * math.pi, rel=1e-12)

    def test_root_finder_failure_is_a_solver_error(self, mocker):
        mocker.patch('hqgeo.cc.metric.brentq', side_effect=ValueError("f(a) and f(b) must have different signs"))
        with pytest.raises(SolverError) as info:
            x0_solve(1.0)
        assert isinstance(info.value.original_exception, ValueError)
        assert info.value.context['operation'] == 'x0_solve'

    def test_printed_coefficient_shifts_root(self):
        assert x0_solve(1.0, as_published=True) < x0_solve(1.0)

    def test_ratio_factor_endpoints(self):
        assert ratio_factor(0.0) == pytest.approx(1.0)
        assert ratio_factor(2.0 * math.pi) == pytest.approx(math.sqrt(math.pi))
        assert ratio_factor(2.0 * math.pi, as_published=True) == pytest.approx(math.sqrt(math.pi / 2.0))


@pytest.mark.unit
class TestDistance:
    def test_horizontal_point(self):
        assert cc_distance_origin(HeisPoint(Quaternion(3.0, 4.0, 0.0, 0.0), PureQuaternion())) == 5.0

    @pytest.mark.parametrize("t", [0.25, 1.0, 7.0])
    def test_pole_distance(self, t):
        pole = HeisPoint(Quaternion(), PureQuaternion(0.0, 0.0, t))
        assert cc_distance_origin(pole) == pytest.approx(math.sqrt(math.pi * t), rel=1e-12)
        assert cc_distance_origin(pole, as_published=True) == pytest.approx(math.sqrt(math.pi * t / 2.0), rel=1e-12)

    def test_unit_example(self):
        a = HeisPoint.origin()
        b = HeisPoint(Quaternion(1.0, 0.0, 0.0, 0.0), PureQuaternion())
        assert cc_distance(a, b) == 1.0

    def test_nearly_vertical_point(self):
        p = HeisPoint(Quaternion(0.0, 0.0, 0.0, 2.28e-94), PureQuaternion(0.0, 0.0, 1.0))
        assert cc_distance_origin(p) == pytest.approx(math.sqrt(math.pi), rel=1e-12)
        assert comparison_ratio(p) <= math.sqrt(math.pi) + 1e-12
        tiny = HeisPoint(Quaternion(1e-17, 0.0, 0.0, 0.0), PureQuaternion(1.0, 0.0, 0.0))
        assert cc_distance_origin(tiny) == pytest.approx(math.sqrt(math.pi), rel=1e-12)

    @given(points)
    @settings(max_examples=50)
    def test_distance_to_itself_is_zero(self, p):
        assert cc_distance(p, p) == 0.0
        assert cc_distance(p, p, as_published=True) == 0.0

    @given(points)
    @settings(max_examples=50)
    def test_comparison_ratio_bounds(self, p):
        assume(koranyi_gauge(p) > 1e-3)
        ratio = comparison_ratio(p)
        assert 1.0 - 1e-12 <= ratio <= math.sqrt(math.pi) + 1e-12

    def test_comparison_ratio_at_origin(self):
        with pytest.raises(DomainError):
            comparison_ratio(HeisPoint.origin())

    def test_sweep_range(self):
        low, high = comparison_ratio_sweep(1000)
        assert low >= 1.0
        assert high <= math.sqrt(math.pi)
        assert high == pytest.approx(math.sqrt(math.pi), rel=5e-3)

    def test_homogeneity(self, rng):
        for _ in range(10):
            p = random_point(rng)
            assert cc_distance_origin(dilate(1.7, p)) == pytest.approx(1.7 * cc_distance_origin(p), rel=1e-10)

    def test_left_invariance_and_symmetry(self, rng):
        for _ in range(10):
            a, b, g = random_point(rng), random_point(rng), random_point(rng)
            d = cc_distance(a, b)
            assert cc_distance(b, a) == pytest.approx(d, rel=1e-10)
            assert cc_distance(compose(g, a), compose(g, b)) == pytest.approx(d, rel=1e-9)

    def test_connecting_paths_are_no_shorter(self, rng):
        for _ in range(10):
            p = random_point(rng)
            assert length_cc(connect(HeisPoint.origin(), p)) >= cc_distance_origin(p) - 1e-9


@pytest.mark.unit
class TestGeodesicThrough:
    def test_origin(self):
        with pytest.raises(DegenerateInputError):
            cc_geodesic_through(HeisPoint.origin())

    @pytest.mark.parametrize("coords", [
        [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 2.0, 0.0],
        [0.3, -0.5, 0.2, 0.9, 1.0, -0.4, 0.25],
        [2.0, 1.0, 0.0, 0.0, 1e-4, 0.0, 0.0],
    ])
    def test_reaches_point_at_distance(self, coords):
        p = HeisPoint.from_array(coords)
        geodesic, radius = cc_geodesic_through(p)
        assert radius == pytest.approx(cc_distance_origin(p), rel=1e-14)
        assert geodesic.eval(radius).is_close(p, 1e-9)
        assert radius <= geodesic.arc_limit + 1e-12


@pytest.mark.unit
class TestSpheres:
    def test_sphere_points_lie_at_radius(self):
        pts = cc_sphere_points(1.5, 64)
        assert pts.shape == (64, 7)
        distances = [cc_distance_origin(HeisPoint.from_array(row)) for row in pts]
        np.testing.assert_allclose(distances, 1.5, rtol=1e-8)

    def test_sphere_sample_returns_points(self):
        sample = cc_sphere_sample(0.5, 8)
        assert len(sample) == 8
        assert all(cc_distance_origin(p) == pytest.approx(0.5, rel=1e-8) for p in sample)

    @pytest.mark.parametrize("radius,n", [(0.0, 10), (-1.0, 10), (1.0, 0)])
    def test_bad_arguments(self, radius, n):
        with pytest.raises(ParameterError):
            cc_sphere_points(radius, n)


@pytest.mark.unit
class TestRiemannianLimit:
    def test_deviation_shrinks_as_scales_grow(self):
        target = HeisPoint.from_array([0.5, 0.2, -0.1, 0.3, 0.4, 0.1, -0.2])
        assert gl_cc_deviation(target, 100.0) < gl_cc_deviation(target, 1.0)
