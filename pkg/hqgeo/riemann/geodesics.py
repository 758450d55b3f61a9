"""
Geodesics of the Riemannian approximations g_L in closed form.

A geodesic from the origin is fixed by a pure quaternion C_L and a quaternion
C = alpha'(0). Writing a = |C_L| and C^a = -(C_L)_a for the vertical constants:

    alpha(lam)  = (lam sinc(a lam) + C_L lam^2 vers(a lam)) C
    alpha'(lam) = exp(C_L lam) C
    beta_a(lam) = (lam / (4 L_a^2) + kappa |C|^2 lam^3 f(a lam)) C^a

with f(x) = (x - sin x)/x^3 and kappa from hqgeo.conventions. Along such a curve
theta_a(gamma') = C^a / (4 L_a^2) is constant.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad_vec, simpson
from scipy.optimize import brentq

from hqgeo.algebra.quaternion import (
    PureQuaternion,
    Quaternion,
    conj_array,
    exp_pure_array,
    f_ratio_array,
    hamilton,
    inverse,
    multiply,
    pure_to_array,
    sinc,
    sinc_array,
    vers,
    vers_array,
)
from hqgeo.conventions import vertical_kappa
from hqgeo.group.frame import theta_array
from hqgeo.group.heisenberg import HeisPoint, compose_array
from hqgeo.paths.curve import SampledCurve
from hqgeo.riemann.connection import MetricParams
from hqgeo.utils.exceptions import DegenerateInputError, OutOfRangeError, ParameterError, SolverError


logger = logging.getLogger(__name__)

BVP_EPSILON = 1e-12
BVP_SCAN_CELLS = 2048
BVP_XTOL = 1e-14
DERIVATIVE_STEP = 1e-5
CURVE_SAMPLES = 257


@dataclass(frozen=True)
class GLGeodesic:
    CL: PureQuaternion
    C: Quaternion
    L: MetricParams
    start: HeisPoint = HeisPoint()

    @property
    def vertical_constants(self) -> np.ndarray:
        """(C^1, C^2, C^3) with C_L = -C^1 i - C^2 j - C^3 k."""
        return -self.CL.as_array()

    @property
    def angle(self) -> float:
        return self.CL.norm()


def _origin_arrays(g: GLGeodesic, lam, kappa: float):
    """Positions, velocities and alpha-only data of the geodesic started at the origin."""
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    cl = g.CL.as_array()
    a = float(np.linalg.norm(cl))
    c = g.C.as_array()
    x = a * lam

    coeff = lam[:, None] * sinc_array(x)[:, None] * np.array([1.0, 0.0, 0.0, 0.0])
    coeff = coeff + (lam * lam * vers_array(x))[:, None] * pure_to_array(cl)
    alpha = hamilton(coeff, c)
    alpha_dot = hamilton(exp_pure_array(np.outer(lam, cl)), c)

    ca = -cl
    inv = 1.0 / (4.0 * g.L.as_array() ** 2)
    c2 = float(c @ c)
    beta = (lam[:, None] * inv + (kappa * c2 * lam ** 3 * f_ratio_array(x))[:, None]) * ca
    beta_dot = (inv + (kappa * c2 * lam ** 2 * vers_array(x))[:, None]) * ca

    points = np.concatenate([alpha, beta], axis=-1)
    velocities = np.concatenate([alpha_dot, beta_dot], axis=-1)
    return points, velocities


def _translate(start: HeisPoint, points: np.ndarray, velocities: np.ndarray):
    if start.is_origin():
        return points, velocities
    g_arr = start.as_array()
    moved = compose_array(g_arr, points)
    prod = hamilton(g_arr[:4], conj_array(velocities[:, :4]))
    pushed = np.concatenate([velocities[:, :4], velocities[:, 4:] + 2.0 * prod[:, 1:]], axis=-1)
    return moved, pushed


def gl_geodesic_points(g: GLGeodesic, lam, as_published: bool = False) -> np.ndarray:
    """(N, 7) coordinates of g at the parameters lam."""
    points, velocities = _origin_arrays(g, lam, vertical_kappa(as_published))
    return _translate(g.start, points, velocities)[0]


def gl_geodesic_velocities(g: GLGeodesic, lam, as_published: bool = False) -> np.ndarray:
    points, velocities = _origin_arrays(g, lam, vertical_kappa(as_published))
    return _translate(g.start, points, velocities)[1]


def gl_geodesic_eval(g: GLGeodesic, lam: float, as_published: bool = False) -> HeisPoint:
    """
    Point of the geodesic at parameter lam.

    C_L = 0 reduces to the straight line (C lam, 0) translated to start;
    C = 0 gives the vertical segment (0, -lam C_L / (4 L^2)).
    """
    return HeisPoint.from_array(gl_geodesic_points(g, [lam], as_published)[0])


def gl_geodesic_velocity(g: GLGeodesic, lam: float, as_published: bool = False) -> np.ndarray:
    return gl_geodesic_velocities(g, [lam], as_published)[0]


def gl_geodesic_curve(g: GLGeodesic, samples: int = CURVE_SAMPLES, as_published: bool = False) -> SampledCurve:
    lam = np.linspace(0.0, 1.0, samples)
    points, velocities = _origin_arrays(g, lam, vertical_kappa(as_published))
    points, velocities = _translate(g.start, points, velocities)
    return SampledCurve(lam, points, velocities)


def theta_constancy_residual(g: GLGeodesic, samples: int = CURVE_SAMPLES, as_published: bool = False) -> float:
    """Largest deviation of theta_a(gamma') from C^a / (4 L_a^2) over the samples."""
    curve = gl_geodesic_curve(g, samples, as_published)
    theta = theta_array(curve.points, curve.velocities)
    expected = g.vertical_constants / (4.0 * g.L.as_array() ** 2)
    return float(np.max(np.abs(theta - expected)))


def ddgam_residual(g: GLGeodesic, samples: int = CURVE_SAMPLES, step: float = DERIVATIVE_STEP) -> float:
    """
    Second-order horizontal equation alpha'' = C_L alpha'.

    alpha'' is taken by central differences of the closed-form alpha'.
    """
    lam = np.linspace(0.0, 1.0, samples)
    kappa = vertical_kappa()
    _, vel_plus = _origin_arrays(g, lam + step, kappa)
    _, vel_minus = _origin_arrays(g, lam - step, kappa)
    _, vel = _origin_arrays(g, lam, kappa)
    second = (vel_plus[:, :4] - vel_minus[:, :4]) / (2.0 * step)
    rhs = hamilton(pure_to_array(g.CL.as_array()), vel[:, :4])
    return float(np.max(np.abs(second - rhs)))


def dgam_residual(g: GLGeodesic, samples: int = CURVE_SAMPLES) -> float:
    """First integral alpha' - C_L alpha = C, in the geodesic's frame at its start."""
    lam = np.linspace(0.0, 1.0, samples)
    points, velocities = _origin_arrays(g, lam, vertical_kappa())
    lhs = velocities[:, :4] - hamilton(pure_to_array(g.CL.as_array()), points[:, :4])
    return float(np.max(np.abs(lhs - g.C.as_array())))


def _betadot_rhs(g: GLGeodesic, s: float) -> np.ndarray:
    """
    beta_a' rebuilt from alpha alone:

        C^a/(4 L_a^2) + 2 |alpha|^2 C^a + 2 Im(alpha conj(c))_a,   c = alpha' - C_L alpha
    """
    points, velocities = _origin_arrays(g, [s], vertical_kappa())
    alpha = points[0, :4]
    c = velocities[0, :4] - hamilton(pure_to_array(g.CL.as_array()), alpha)
    ca = g.vertical_constants
    cross = 2.0 * hamilton(alpha, conj_array(c))[1:]
    return ca / (4.0 * g.L.as_array() ** 2) + 2.0 * float(alpha @ alpha) * ca + cross


def betadot_residual(g: GLGeodesic, checkpoints: int = 9, as_published: bool = False) -> float:
    """
    Integrate the vertical equation with adaptive quadrature and compare to beta.

    The integrand depends on alpha only, so it is independent of the vertical
    coefficient; only the closed-form beta it is compared against uses kappa.
    """
    lam = np.linspace(0.0, 1.0, checkpoints)[1:]
    closed, _ = _origin_arrays(g, lam, vertical_kappa(as_published))
    worst = 0.0
    for k, end in enumerate(lam):
        try:
            integral, _ = quad_vec(lambda s: _betadot_rhs(g, s), 0.0, float(end), epsabs=1e-13, epsrel=1e-12)
        except (ValueError, ArithmeticError) as e:
            raise SolverError("Quadrature of the vertical equation failed", original_exception=e,
                              context={'operation': 'betadot_residual'})
        worst = max(worst, float(np.max(np.abs(integral - closed[k, 4:]))))
    return worst


def gl_length(g: GLGeodesic) -> float:
    """g_L length on [0, 1]: sqrt(|C|^2 + sum (C^a)^2 / (16 L_a^2))."""
    ca = g.vertical_constants
    return math.sqrt(g.C.norm_squared() + float(np.sum(ca ** 2 / (16.0 * g.L.as_array() ** 2))))


def gl_length_quadrature(g: GLGeodesic, samples: int = 1025, as_published: bool = False) -> float:
    """Simpson integral of the g_L speed sqrt(|alpha'|^2 + sum L_a^2 theta_a^2)."""
    curve = gl_geodesic_curve(g, samples, as_published)
    theta = theta_array(curve.points, curve.velocities)
    speed = np.sqrt(np.sum(curve.velocities[:, :4] ** 2, axis=-1)
                    + np.sum((g.L.as_array() * theta) ** 2, axis=-1))
    return float(simpson(speed, x=curve.lam))


def _bvp_residual(a, scale_sq: float, q_sq: float, t_norm: float, kappa: float):
    a = np.asarray(a, dtype=float)
    return a / (4.0 * scale_sq) + 0.5 * kappa * q_sq * a * f_ratio_array(a) / vers_array(a) - t_norm


def solve_gl_bvp(target: HeisPoint, L: MetricParams, as_published: bool = False) -> GLGeodesic:
    """
    Geodesic from the origin reaching target at lam = 1, on the first arc.

    Args:
        target: End point
        L: Symmetric metric scales
        as_published: Use the printed vertical coefficient

    Returns:
        GLGeodesic with |C_L| in (0, 2 pi)

    Raises:
        ParameterError: If L is not symmetric
        DegenerateInputError: If target is the origin
        OutOfRangeError: If no first-arc geodesic reaches target
    """
    if not L.is_symmetric:
        raise ParameterError("Boundary-value solving needs L1 = L2 = L3",
                             context={'operation': 'solve_gl_bvp', 'params': L.as_array().tolist()})
    if target.is_origin():
        raise DegenerateInputError("Target coincides with the start point", context={'operation': 'solve_gl_bvp'})

    scale_sq = L.L1 * L.L1
    q_sq = target.q.norm_squared()
    t_norm = target.t.norm()
    if t_norm == 0.0:
        return GLGeodesic(PureQuaternion(), target.q, L)
    if q_sq == 0.0:
        return GLGeodesic(target.t * (-4.0 * scale_sq), Quaternion(), L)

    kappa = vertical_kappa(as_published)
    grid = np.linspace(BVP_EPSILON, 2.0 * math.pi - BVP_EPSILON, BVP_SCAN_CELLS + 1)
    values = _bvp_residual(grid, scale_sq, q_sq, t_norm, kappa)
    crossings = np.nonzero(np.sign(values[:-1]) * np.sign(values[1:]) <= 0.0)[0]
    if crossings.size == 0:
        raise OutOfRangeError(
            "Target lies beyond the first geodesic arc",
            context={'operation': 'solve_gl_bvp', 'point': target.as_array().tolist()}
        )
    cell = int(crossings[0])

    def residual(a: float) -> float:
        return float(_bvp_residual(a, scale_sq, q_sq, t_norm, kappa))

    if values[cell] == 0.0:
        a = float(grid[cell])
    else:
        try:
            a = brentq(residual, grid[cell], grid[cell + 1], xtol=BVP_XTOL)
        except (ValueError, ArithmeticError) as e:
            raise SolverError(
                "g_L boundary-value root not bracketed",
                original_exception=e,
                context={'operation': 'solve_gl_bvp', 'point': target.as_array().tolist()}
            )
    logger.debug(f"g_L boundary value: |C_L| = {a:.15g}",
                 extra={'operation': 'solve_gl_bvp', 'residual': residual(a)})

    direction = target.t * (-1.0 / t_norm)
    cl = direction * a
    factor = Quaternion(sinc(a), 0.0, 0.0, 0.0) + cl.as_quaternion() * vers(a)
    c = multiply(inverse(factor), target.q)
    return GLGeodesic(cl, c, L)


def gl_bvp_endpoint_error(target: HeisPoint, L: MetricParams, as_published: bool = False) -> float:
    """Coordinate distance between the solved geodesic's end and target."""
    g = solve_gl_bvp(target, L, as_published)
    end = gl_geodesic_points(g, [1.0], as_published)[0]
    return float(np.max(np.abs(end - target.as_array())))

