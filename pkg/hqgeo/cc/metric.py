"""
Carnot-Caratheodory geodesics, spheres and distance.

Unit-speed geodesics from the origin are parametrized by a pure quaternion A
and a unit quaternion B:

    alpha(s) = (s sinc(|A| s) + A s^2 vers(|A| s)) B
    beta(s)  = -kappa s^3 f(|A| s) A,        f(x) = (x - sin x)/x^3

On the first arc |A| s <= 2 pi the parameter s is the CC distance to the origin.
A point with horizontal radius |q| and vertical size |t| is reached with
x0 = |A| s solving h(x0) = |q|^2/|t|, h(x) = (2/kappa)(1 - cos x)/(x - sin x),
and then d_cc = (4 vers(x0)^2 + kappa^2 x0^2 f(x0)^2)^(-1/4) d_K.
"""
import logging
import math
from dataclasses import dataclass
from typing import List, Tuple, Union

import numpy as np
from scipy.integrate import quad_vec
from scipy.optimize import brentq

from hqgeo.algebra.quaternion import (
    PureQuaternion,
    Quaternion,
    as_quaternion,
    conj_array,
    exp_pure_array,
    f_ratio,
    f_ratio_array,
    hamilton,
    inverse,
    multiply,
    sinc,
    sinc_array,
    vers,
    vers_array,
)
from hqgeo.conventions import vertical_kappa
from hqgeo.group.frame import horizontality_residual
from hqgeo.group.heisenberg import UNIT_TOLERANCE, HeisPoint, compose, invert, koranyi_gauge
from hqgeo.group.sampling import sphere_parameters
from hqgeo.paths.curve import SampledCurve
from hqgeo.riemann.connection import MetricParams
from hqgeo.riemann.geodesics import gl_geodesic_points, solve_gl_bvp
from hqgeo.utils.exceptions import DegenerateInputError, DomainError, ParameterError, SolverError


logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
B_NORM_DIAGNOSTIC = 1e-8
CURVE_SAMPLES = 257


@dataclass(frozen=True)
class CCGeodesic:
    """
    Unit-speed CC geodesic from the origin; A = 0 is the straight line (B s, 0).
    """
    A: PureQuaternion
    B: Quaternion

    def __post_init__(self):
        if abs(self.B.norm() - 1.0) >= UNIT_TOLERANCE:
            raise ParameterError(
                f"B must be a unit quaternion, |B| = {self.B.norm():.16g}",
                context={'operation': 'cc_geodesic', 'params': self.B.as_array().tolist()}
            )

    @property
    def arc_limit(self) -> float:
        """Largest s on the first arc."""
        a = self.A.norm()
        return math.inf if a == 0.0 else TWO_PI / a

    def points(self, s, as_published: bool = False) -> np.ndarray:
        s = np.atleast_1d(np.asarray(s, dtype=float))
        a_arr = np.broadcast_to(self.A.as_array(), s.shape + (3,))
        b_arr = np.broadcast_to(self.B.as_array(), s.shape + (4,))
        return _cc_arrays(a_arr, b_arr, s, vertical_kappa(as_published))[0]

    def velocities(self, s, as_published: bool = False) -> np.ndarray:
        s = np.atleast_1d(np.asarray(s, dtype=float))
        a_arr = np.broadcast_to(self.A.as_array(), s.shape + (3,))
        b_arr = np.broadcast_to(self.B.as_array(), s.shape + (4,))
        return _cc_arrays(a_arr, b_arr, s, vertical_kappa(as_published))[1]

    def eval(self, s: float, as_published: bool = False) -> HeisPoint:
        return HeisPoint.from_array(self.points([s], as_published)[0])

    def curve(self, length: float, samples: int = CURVE_SAMPLES, as_published: bool = False) -> SampledCurve:
        """The arc s in [0, length] reparametrized by lam = s / length."""
        lam = np.linspace(0.0, 1.0, samples)
        points = self.points(lam * length, as_published)
        velocities = self.velocities(lam * length, as_published) * length
        return SampledCurve(lam, points, velocities)


def _cc_arrays(a_arr: np.ndarray, b_arr: np.ndarray, s: np.ndarray, kappa: float):
    """Points and s-velocities for stacked (A, B, s) with shapes (N, 3), (N, 4), (N,)."""
    a = np.linalg.norm(a_arr, axis=-1)
    x = a * s
    coeff = np.concatenate([(s * sinc_array(x))[..., None], (s * s * vers_array(x))[..., None] * a_arr], axis=-1)
    alpha = hamilton(coeff, b_arr)
    alpha_dot = hamilton(exp_pure_array(a_arr * s[..., None]), b_arr)
    beta = -kappa * (s ** 3 * f_ratio_array(x))[..., None] * a_arr
    beta_dot = -kappa * (s * s * vers_array(x))[..., None] * a_arr
    return np.concatenate([alpha, beta], axis=-1), np.concatenate([alpha_dot, beta_dot], axis=-1)


def cc_geodesic_eval(A: PureQuaternion, B: Quaternion, lam: float, as_published: bool = False) -> HeisPoint:
    """
    Point at arclength lam on the CC geodesic (A, B).

    Raises:
        ParameterError: If B is not a unit quaternion
    """
    return CCGeodesic(A, as_quaternion(B)).eval(lam, as_published)


def cc_geodesic_points(A: PureQuaternion, B: Quaternion, lam, as_published: bool = False) -> np.ndarray:
    return CCGeodesic(A, as_quaternion(B)).points(lam, as_published)


def cc_horizontality_residual(
    geodesic: CCGeodesic,
    length: float = 1.0,
    samples: int = CURVE_SAMPLES,
    as_published: bool = False
) -> float:
    return horizontality_residual(geodesic.curve(length, samples, as_published))


def _h(x: float, kappa: float) -> float:
    return (2.0 / kappa) * vers(x) / (x * f_ratio(x))


def x0_solve(ratio: float, as_published: bool = False) -> float:
    """
    Root x0 in [0, 2 pi] of h(x0) = ratio, h(x) = (2/kappa)(1 - cos x)/(x - sin x).

    h decreases strictly from +inf at 0 to 0 at 2 pi.

    Args:
        ratio: |q|^2 / |t|, possibly +inf
        as_published: Use the printed vertical coefficient

    Returns:
        x0, with 0 for ratio = +inf and 2 pi for any ratio at or below h(2 pi)

    Raises:
        DomainError: If ratio is negative or NaN
        SolverError: If the bracketing root finder fails
    """
    ratio = float(ratio)
    if math.isnan(ratio) or ratio < 0.0:
        raise DomainError(f"Ratio must be nonnegative, got {ratio}", context={'operation': 'x0_solve'})
    if math.isinf(ratio):
        return 0.0
    kappa = vertical_kappa(as_published)
    if ratio <= _h(TWO_PI, kappa):
        return TWO_PI
    lo = 1.0
    while _h(lo, kappa) <= ratio and lo > 1e-300:
        lo *= 0.5
    if _h(lo, kappa) <= ratio:
        return lo
    try:
        root = brentq(lambda x: _h(x, kappa) - ratio, lo, TWO_PI, xtol=np.finfo(float).tiny)
    except (ValueError, ArithmeticError) as e:
        raise SolverError(
            f"No root of h(x) = {ratio:.6g} on [{lo:.6g}, 2 pi]",
            original_exception=e,
            context={'operation': 'x0_solve', 'params': {'ratio': ratio, 'kappa': kappa}}
        )
    logger.debug(f"x0 = {root:.15g} for ratio {ratio:.15g}",
                 extra={'operation': 'x0_solve', 'residual': _h(root, kappa) - ratio})
    return float(root)


def ratio_factor(x0, as_published: bool = False):
    """d_cc / d_K as a function of x0: (4 vers^2 + kappa^2 x0^2 f^2)^(-1/4). Accepts arrays."""
    kappa = vertical_kappa(as_published)
    x = np.asarray(x0, dtype=float)
    value = (4.0 * vers_array(x) ** 2 + (kappa * x * f_ratio_array(x)) ** 2) ** -0.25
    return float(value) if value.ndim == 0 else value


def cc_distance_origin(p: HeisPoint, as_published: bool = False) -> float:
    """
    CC distance from the origin to p.

    Equals |q| when t = 0 and sqrt(pi |t|) when q = 0.
    """
    q_sq = p.q.norm_squared()
    t_norm = p.t.norm()
    if t_norm == 0.0:
        return math.sqrt(q_sq)
    x0 = x0_solve(q_sq / t_norm, as_published)
    return ratio_factor(x0, as_published) * koranyi_gauge(p)


def cc_distance(a: HeisPoint, b: HeisPoint, as_published: bool = False) -> float:
    return cc_distance_origin(compose(invert(a), b), as_published)


def comparison_ratio(p: HeisPoint, as_published: bool = False) -> float:
    """
    d_cc(O, p) / d_K(O, p), a function of x0 alone with values in [1, sqrt(pi)].

    Raises:
        DomainError: At the origin
    """
    if p.is_origin():
        raise DomainError("Comparison ratio is undefined at the origin", context={'operation': 'comparison_ratio'})
    return cc_distance_origin(p, as_published) / koranyi_gauge(p)


def comparison_ratio_sweep(count: int, as_published: bool = False) -> Tuple[float, float]:
    """(min, max) of the ratio factor over an open grid of x0 in (0, 2 pi)."""
    x = np.linspace(0.0, TWO_PI, count + 2)[1:-1]
    values = ratio_factor(x, as_published)
    return float(np.min(values)), float(np.max(values))


def cc_geodesic_through(p: HeisPoint, as_published: bool = False) -> Tuple[CCGeodesic, float]:
    """
    First-arc CC geodesic from the origin through p.

    Returns:
        Tuple (geodesic, R) with geodesic.eval(R) = p and R = d_cc(O, p)

    Raises:
        DegenerateInputError: If p is the origin
    """
    if p.is_origin():
        raise DegenerateInputError("No geodesic direction at the origin", context={'operation': 'cc_geodesic_through'})

    q_norm = p.q.norm()
    t_norm = p.t.norm()
    if t_norm == 0.0:
        return CCGeodesic(PureQuaternion(), p.q / q_norm), q_norm

    radius = cc_distance_origin(p, as_published)
    x0 = x0_solve(q_norm * q_norm / t_norm, as_published)
    a = p.t * (-(x0 / radius) / t_norm)
    if q_norm == 0.0:
        return CCGeodesic(a, Quaternion(1.0, 0.0, 0.0, 0.0)), radius

    factor = Quaternion(radius * sinc(x0), 0.0, 0.0, 0.0) + a.as_quaternion() * (radius * radius * vers(x0))
    b = multiply(inverse(factor), p.q)
    drift = abs(b.norm() - 1.0)
    if drift > B_NORM_DIAGNOSTIC:
        logger.warning(f"Recovered direction is off the unit sphere by {drift:.3e}",
                       extra={'operation': 'cc_geodesic_through', 'residual': drift})
    return CCGeodesic(a, b / b.norm()), radius


def _check_sphere_args(radius: float, n: int):
    if not (math.isfinite(radius) and radius > 0.0):
        raise ParameterError(f"Sphere radius must be positive, got {radius}")
    if n < 1:
        raise ParameterError(f"Sample count must be at least 1, got {n}")


def cc_sphere_points(radius: float, n: int, as_published: bool = False) -> np.ndarray:
    """
    (n, 7) points of the CC sphere of the given radius.

    |A| R runs over [0, 2 pi) and the directions of A and B over S^2 x S^3,
    all from one unscrambled Halton sequence.
    """
    _check_sphere_args(radius, n)
    u0, dirs3, dirs4 = sphere_parameters(n)
    a_arr = (TWO_PI * u0 / radius)[:, None] * dirs3
    s = np.full(n, float(radius))
    return _cc_arrays(a_arr, dirs4, s, vertical_kappa(as_published))[0]


def cc_sphere_sample(radius: float, n: int, as_published: bool = False) -> List[HeisPoint]:
    return [HeisPoint.from_array(row) for row in cc_sphere_points(radius, n, as_published)]


def gl_cc_deviation(target: HeisPoint, scale: Union[float, MetricParams], samples: int = 65) -> float:
    """
    Sup coordinate distance between the g_L geodesic and the CC geodesic to target.

    Both are sampled on lam in [0, 1]; the CC geodesic at arclength lam R.
    """
    metric = scale if isinstance(scale, MetricParams) else MetricParams.symmetric(float(scale))
    lam = np.linspace(0.0, 1.0, samples)
    gl_points = gl_geodesic_points(solve_gl_bvp(target, metric), lam)
    geodesic, radius = cc_geodesic_through(target)
    return float(np.max(np.abs(gl_points - geodesic.points(lam * radius))))


def vertical_gain_oracle(
    geodesic: CCGeodesic,
    length: float = 1.0,
    as_published: bool = False
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Vertical end point by quadrature of beta' = 2 Im(alpha conj(alpha')) and in closed form.

    The quadrature sees only the horizontal part, so it fixes the vertical
    coefficient independently of it.

    Returns:
        Tuple (integrated, closed_form) of vertical parts at arclength length
    """
    a_arr = geodesic.A.as_array()[None, :]
    b_arr = geodesic.B.as_array()[None, :]

    def integrand(s: float) -> np.ndarray:
        points, velocities = _cc_arrays(a_arr, b_arr, np.array([s]), vertical_kappa())
        return 2.0 * hamilton(points[0, :4], conj_array(velocities[0, :4]))[1:]

    try:
        integrated, _ = quad_vec(integrand, 0.0, float(length), epsabs=1e-13, epsrel=1e-12)
    except (ValueError, ArithmeticError) as e:
        raise SolverError("Quadrature of the vertical gain failed", original_exception=e,
                          context={'operation': 'vertical_gain_oracle'})
    closed = geodesic.points([length], as_published)[0, 4:]
    return np.asarray(integrated), closed
