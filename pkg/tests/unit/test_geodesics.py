"""
Unit tests for the closed-form g_L geodesics and their boundary-value solver.
"""
import numpy as np
import pytest

from hqgeo.algebra.quaternion import PureQuaternion, Quaternion
from hqgeo.group.frame import theta_array
from hqgeo.group.heisenberg import HeisPoint
from hqgeo.riemann.connection import MetricParams
from hqgeo.riemann.geodesics import (
    GLGeodesic,
    betadot_residual,
    ddgam_residual,
    dgam_residual,
    gl_bvp_endpoint_error,
    gl_geodesic_curve,
    gl_geodesic_eval,
    gl_geodesic_points,
    gl_length,
    gl_length_quadrature,
    solve_gl_bvp,
    theta_constancy_residual,
)
from hqgeo.utils.exceptions import DegenerateInputError, ParameterError, SolverError


GEODESICS = [
    GLGeodesic(PureQuaternion(0.5, -1.0, 0.3), Quaternion(0.2, 1.0, -0.5, 0.7), MetricParams.symmetric(1.3)),
    GLGeodesic(PureQuaternion(3.0, 2.0, -4.0), Quaternion(1.0, 0.0, 0.0, 0.0), MetricParams(1.0, 2.0, 0.5)),
    GLGeodesic(PureQuaternion(1e-9, 0.0, 0.0), Quaternion(0.0, 0.3, 0.3, 0.0), MetricParams()),
]


@pytest.mark.unit
class TestClosedForm:
    def test_straight_line(self):
        g = GLGeodesic(PureQuaternion(), Quaternion(1.0, 2.0, 0.0, -1.0), MetricParams())
        p = gl_geodesic_eval(g, 0.5)
        assert p.is_close(HeisPoint(Quaternion(0.5, 1.0, 0.0, -0.5), PureQuaternion()), 1e-15)

    def test_vertical_segment(self):
        g = GLGeodesic(PureQuaternion(-8.0, 0.0, 4.0), Quaternion(), MetricParams(2.0, 1.0, 1.0))
        p = gl_geodesic_eval(g, 1.0)
        np.testing.assert_allclose(p.as_array(), [0, 0, 0, 0, 0.5, 0.0, -1.0], atol=1e-15)

    def test_starts_at_start_point(self):
        start = HeisPoint.from_array([1, 0, -1, 2, 0.5, 0.5, 0.0])
        g = GLGeodesic(PureQuaternion(1.0, 0.0, 0.0), Quaternion(0.0, 1.0, 0.0, 0.0), MetricParams(), start)
        np.testing.assert_allclose(gl_geodesic_points(g, [0.0])[0], start.as_array(), atol=1e-15)
        assert theta_constancy_residual(g) <= 1e-12

    @pytest.mark.parametrize("g", GEODESICS)
    def test_first_integrals(self, g):
        assert theta_constancy_residual(g) <= 1e-12
        assert dgam_residual(g) <= 1e-12
        assert ddgam_residual(g) <= 1e-7

    @pytest.mark.parametrize("g", GEODESICS[:2])
    def test_vertical_equation(self, g):
        assert betadot_residual(g) <= 1e-9

    def test_printed_coefficient_breaks_vertical_equation(self):
        g = GEODESICS[0]
        assert betadot_residual(g, as_published=True) > 1e-3
        assert theta_constancy_residual(g, as_published=True) > 1e-3

    @pytest.mark.parametrize("g", GEODESICS)
    def test_constant_speed_length(self, g):
        assert gl_length_quadrature(g) == pytest.approx(gl_length(g), rel=1e-9)

    def test_curve_velocities_match_theta_constants(self):
        g = GEODESICS[1]
        curve = gl_geodesic_curve(g, samples=33)
        theta = theta_array(curve.points, curve.velocities)
        expected = g.vertical_constants / (4.0 * g.L.as_array() ** 2)
        np.testing.assert_allclose(theta, np.tile(expected, (33, 1)), atol=1e-12)


@pytest.mark.unit
class TestBoundaryValue:
    def test_round_trip(self):
        g = GEODESICS[0]
        target = gl_geodesic_eval(g, 1.0)
        solved = solve_gl_bvp(target, g.L)
        np.testing.assert_allclose(solved.CL.as_array(), g.CL.as_array(), atol=1e-9)
        np.testing.assert_allclose(solved.C.as_array(), g.C.as_array(), atol=1e-9)

    @pytest.mark.parametrize("coords", [
        [1.0, 0.0, 0.0, 0.0, 0.01, 0.0, 0.0],
        [0.3, -0.2, 0.5, 0.1, 2.0, -1.0, 0.4],
        [0.0, 0.0, 0.0, 1e-3, 5.0, 0.0, 0.0],
    ])
    @pytest.mark.parametrize("scale", [0.5, 1.0, 4.0])
    def test_endpoint_error(self, coords, scale):
        target = HeisPoint.from_array(coords)
        assert gl_bvp_endpoint_error(target, MetricParams.symmetric(scale)) <= 1e-9

    def test_horizontal_target(self):
        target = HeisPoint(Quaternion(0.0, 1.0, 2.0, 0.0), PureQuaternion())
        g = solve_gl_bvp(target, MetricParams())
        assert g.CL == PureQuaternion()
        assert g.C == target.q

    def test_vertical_target(self):
        target = HeisPoint(Quaternion(), PureQuaternion(0.0, 2.0, 0.0))
        g = solve_gl_bvp(target, MetricParams.symmetric(0.5))
        assert gl_geodesic_eval(g, 1.0).is_close(target, 1e-14)

    def test_printed_coefficient_still_hits_target(self):
        target = HeisPoint.from_array([0.3, -0.2, 0.5, 0.1, 2.0, -1.0, 0.4])
        assert gl_bvp_endpoint_error(target, MetricParams(), as_published=True) <= 1e-9

    def test_requires_symmetric_scales(self):
        with pytest.raises(ParameterError):
            solve_gl_bvp(HeisPoint.from_array([1, 0, 0, 0, 1, 0, 0]), MetricParams(1.0, 2.0, 3.0))

    def test_origin_is_degenerate(self):
        with pytest.raises(DegenerateInputError):
            solve_gl_bvp(HeisPoint.origin(), MetricParams())

    def test_root_finder_failure_is_a_solver_error(self, mocker):
        mocker.patch('hqgeo.riemann.geodesics.brentq', side_effect=ValueError("f(a) and f(b) must have different signs"))
        with pytest.raises(SolverError) as info:
            solve_gl_bvp(HeisPoint.from_array([1, 0, 0, 0, 0.5, 0, 0]), MetricParams.symmetric(2.0))
        assert isinstance(info.value.original_exception, ValueError)

    def test_quadrature_failure_is_a_solver_error(self, mocker):
        mocker.patch('hqgeo.riemann.geodesics.quad_vec', side_effect=FloatingPointError("overflow"))
        with pytest.raises(SolverError):
            betadot_residual(GEODESICS[0])
