"""
Horizontal geometry of hypersurfaces S = {u = 0}.

With a_i = xi_i u, A = |(a_i)| and H[i, j] = xi_i(xi_j u), the horizontal
mean curvature is

    H0 = sum_i xi_i(a_i / A) = tr(H)/A - a^T H a / A^3

computed for u exactly as supplied, so u and -u give opposite signs.
"""
import logging
import math
from dataclasses import dataclass, replace
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from hqgeo.algebra.quaternion import PureQuaternion, Quaternion, sinc
from hqgeo.conventions import vertical_kappa
from hqgeo.group.frame import ScalarField, horizontal_derivatives, xi_second_matrix
from hqgeo.group.heisenberg import HeisPoint
from hqgeo.riemann.connection import MetricParams
from hqgeo.utils.exceptions import DomainError, SolverError


logger = logging.getLogger(__name__)

CHARACTERISTIC_TOLERANCE = 1e-8
PROFILE_STEP = 1e-5
PROFILE_STEP_SECOND = 1e-4
CC_PROFILE_STEP = 1e-3


@dataclass(frozen=True)
class ImplicitSurface:
    u: ScalarField
    characteristic_tolerance: float = CHARACTERISTIC_TOLERANCE
    name: str = ''

    def with_field(self, u: ScalarField) -> 'ImplicitSurface':
        return replace(self, u=u)


def horizontal_gradient(S: ImplicitSurface, p: HeisPoint) -> np.ndarray:
    """(xi_1 u, .., xi_4 u) at p; EvaluationError on non-finite derivatives."""
    return horizontal_derivatives(S.u, p)


def is_characteristic(S: ImplicitSurface, p: HeisPoint) -> bool:
    return float(np.linalg.norm(horizontal_gradient(S, p))) <= S.characteristic_tolerance


def _require_noncharacteristic(S: ImplicitSurface, p: HeisPoint, operation: str) -> Tuple[np.ndarray, float]:
    a = horizontal_gradient(S, p)
    norm = float(np.linalg.norm(a))
    if norm <= S.characteristic_tolerance:
        raise DomainError(
            f"Characteristic point of {S.name or 'surface'}: |horizontal gradient| = {norm:.3e}",
            context={'operation': operation, 'point': list(_coords(p)), 'tolerance': S.characteristic_tolerance}
        )
    return a, norm


def _coords(p) -> np.ndarray:
    return p.as_array() if isinstance(p, HeisPoint) else np.asarray(p, dtype=float)


def horizontal_normal(S: ImplicitSurface, p: HeisPoint) -> np.ndarray:
    """
    Horizontal unit normal as coefficients on xi_1..xi_4.

    Raises:
        DomainError: At a characteristic point
    """
    a, norm = _require_noncharacteristic(S, p, 'horizontal_normal')
    return a / norm


def riemannian_normal(S: ImplicitSurface, p: HeisPoint, L: MetricParams) -> np.ndarray:
    """
    g_L unit normal as coefficients on xi_1..xi_4, T_1/L_1..T_3/L_3.

    The vertical coefficients are (T_a u)/L_a, so they vanish as L grows and the
    horizontal ones tend to the horizontal normal.

    Raises:
        DomainError: Where the g_L gradient vanishes
    """
    a = horizontal_gradient(S, p)
    b = S.u.grad(p)[4:] / L.as_array()
    coeffs = np.concatenate([a, b])
    norm = float(np.linalg.norm(coeffs))
    if norm == 0.0:
        raise DomainError("Critical point of u", context={'operation': 'riemannian_normal', 'point': list(_coords(p))})
    return coeffs / norm


def hmc(S: ImplicitSurface, p: HeisPoint) -> float:
    """
    Horizontal mean curvature of S at p.

    Raises:
        DomainError: At a characteristic point
        EvaluationError: If derivatives of u are not finite
    """
    a, norm = _require_noncharacteristic(S, p, 'hmc')
    second = xi_second_matrix(S.u, p)
    return float(np.trace(second) / norm - a @ second @ a / norm ** 3)


@dataclass(frozen=True)
class StepHalvingReport:
    value: float
    halved: float
    richardson: float
    error: float

    def to_dict(self) -> dict:
        return {'value': self.value, 'halved': self.halved, 'richardson': self.richardson, 'error': self.error}


def _halving(value: float, halved: float) -> StepHalvingReport:
    # central differences are second order
    return StepHalvingReport(value, halved, (4.0 * halved - value) / 3.0, abs(halved - value))


def hmc_step_halving(S: ImplicitSurface, p: HeisPoint, drop_analytic: bool = True) -> StepHalvingReport:
    """HMC with the finite-difference steps of u and with half of them."""
    coarse = hmc(S.with_field(S.u.with_steps(1.0, drop_analytic)), p)
    fine = hmc(S.with_field(S.u.with_steps(0.5, drop_analytic)), p)
    return _halving(coarse, fine)


@dataclass(frozen=True)
class RadialProfile:
    """
    Profile tau = f(r) of a surface |t| = f(|q|).

    Missing derivatives are completed by central differences in r.
    """
    f: Callable[[float], float]
    fprime: Optional[Callable[[float], float]] = None
    fsecond: Optional[Callable[[float], float]] = None
    name: str = ''
    fd_step: float = PROFILE_STEP
    fd_step_second: float = PROFILE_STEP_SECOND

    def value(self, r: float) -> float:
        return float(self.f(r))

    def d1(self, r: float) -> float:
        if self.fprime is not None:
            return float(self.fprime(r))
        h = self.fd_step * max(1.0, abs(r))
        return (self.value(r + h) - self.value(r - h)) / (2.0 * h)

    def d2(self, r: float) -> float:
        if self.fsecond is not None:
            return float(self.fsecond(r))
        h = self.fd_step_second * max(1.0, abs(r))
        if self.fprime is not None:
            return (float(self.fprime(r + h)) - float(self.fprime(r - h))) / (2.0 * h)
        return (self.value(r + h) - 2.0 * self.value(r) + self.value(r - h)) / (h * h)


def _profile_terms(fp: RadialProfile, r: float) -> Tuple[float, float, float]:
    if not r > 0.0:
        raise DomainError(f"Profile radius must be positive, got {r}", context={'operation': 'hmc_profile'})
    f = fp.value(r)
    if not f > 0.0:
        raise DomainError(f"Profile must be positive, f({r}) = {f}",
                          context={'operation': 'hmc_profile', 'params': {'profile': fp.name}})
    return f, fp.d1(r), fp.d2(r)


def hmc_profile(fp: RadialProfile, r: float) -> float:
    """
    Horizontal mean curvature of tau = f(r) at radius r:

        [-4r(2f' + r f'') - 3f'^3/r] / D^(3/2) + 8r^2 / (f sqrt(D)),   D = 4r^2 + f'^2

    Raises:
        DomainError: If r <= 0 or f(r) <= 0
    """
    f, f1, f2 = _profile_terms(fp, r)
    d = 4.0 * r * r + f1 * f1
    return (-4.0 * r * (2.0 * f1 + r * f2) - 3.0 * f1 ** 3 / r) / d ** 1.5 + 8.0 * r * r / (f * math.sqrt(d))


def minimality_residual(fp: RadialProfile, r: float) -> float:
    """
    -4 r^2 f (2f' + r f'') - 3 f f'^3 + 8 r^3 (4r^2 + f'^2).

    Equals hmc_profile * r * f * D^(3/2), so it has the sign of the curvature.
    """
    f = fp.value(r)
    f1 = fp.d1(r)
    f2 = fp.d2(r)
    return -4.0 * r * r * f * (2.0 * f1 + r * f2) - 3.0 * f * f1 ** 3 + 8.0 * r ** 3 * (4.0 * r * r + f1 * f1)


def radial_surface(fp: RadialProfile, name: Optional[str] = None) -> ImplicitSurface:
    """Surface u = |t| - f(|q|) with analytic gradient and Hessian away from r = 0, tau = 0."""

    def value(x: np.ndarray) -> float:
        return float(np.linalg.norm(x[4:]) - fp.value(float(np.linalg.norm(x[:4]))))

    def gradient(x: np.ndarray) -> np.ndarray:
        q, t = x[:4], x[4:]
        r = float(np.linalg.norm(q))
        tau = float(np.linalg.norm(t))
        g = np.zeros(7)
        if r > 0.0:
            g[:4] = -fp.d1(r) * q / r
        if tau > 0.0:
            g[4:] = t / tau
        return g

    def hessian(x: np.ndarray) -> np.ndarray:
        q, t = x[:4], x[4:]
        r = float(np.linalg.norm(q))
        tau = float(np.linalg.norm(t))
        h = np.zeros((7, 7))
        if r == 0.0 or tau == 0.0:
            h.fill(np.nan)
            return h
        qq = np.outer(q, q)
        h[:4, :4] = -fp.d2(r) * qq / r ** 2 - fp.d1(r) * (np.eye(4) / r - qq / r ** 3)
        h[4:, 4:] = np.eye(3) / tau - np.outer(t, t) / tau ** 3
        return h

    return ImplicitSurface(ScalarField(value, gradient, hessian), name=name or fp.name)


def profile_point(fp: RadialProfile, r: float) -> HeisPoint:
    """Canonical surface point q = r, t = f(r) i."""
    return HeisPoint(Quaternion(float(r), 0.0, 0.0, 0.0), PureQuaternion(fp.value(r), 0.0, 0.0))


def g_matrix(fp: RadialProfile, p: HeisPoint) -> np.ndarray:
    """
    Matrix G with (xi_1 u, .., xi_4 u) = G (x_1, .., x_4) for u = |t| - f(|q|).

    Diagonal -f'(r)/r, off-diagonal entries 2 t_a / tau in the skew pattern of
    the frame.
    """
    r = p.q.norm()
    tau = p.t.norm()
    if r == 0.0 or tau == 0.0:
        raise DomainError("G is defined for |q| > 0 and |t| > 0", context={'operation': 'g_matrix'})
    d = -fp.d1(r) / r
    t1, t2, t3 = 2.0 * p.t.as_array() / tau
    return np.array([
        [d, t1, t2, t3],
        [-t1, d, t3, -t2],
        [-t2, -t3, d, t1],
        [-t3, t2, -t1, d],
    ])


def _cc_profile_c(radius: float, r: float) -> float:
    """c in (0, 2 pi / R) with r = (2/c) sin(cR/2) = R sinc(cR/2)."""
    upper = 2.0 * math.pi / radius
    try:
        return brentq(lambda c: radius * sinc(0.5 * c * radius) - r, 0.0, upper, xtol=1e-15)
    except (ValueError, ArithmeticError) as e:
        raise SolverError("CC sphere profile parameter not bracketed",
                          original_exception=e, context={'operation': 'cc_sphere_profile', 'params': {'R': radius, 'r': r}})


def _cc_parts(radius: float, c: float, kappa: float) -> Tuple[float, float]:
    x = c * radius
    f1 = radius * sinc(0.5 * x)
    f2 = kappa * (x - math.sin(x)) / (c * c)
    return f1, f2


def cc_sphere_profile(
    radius: float,
    r: float,
    as_published: bool = False,
    mode: str = 'analytic',
    step: float = CC_PROFILE_STEP
) -> Tuple[float, float, float]:
    """
    (f, f', f'') at r of the CC sphere of the given radius.

    The sphere is r = (2/c) sin(cR/2), tau = kappa (cR - sin cR)/c^2 for
    c in (0, 2 pi/R); f' and f'' follow by implicit differentiation in c,
    either analytically or ('fd') by central differences in c with a
    relative step.

    Raises:
        DomainError: If r is not in (0, R)
        SolverError: If c is not bracketed
    """
    if not 0.0 < r < radius:
        raise DomainError(f"CC sphere profile needs 0 < r < R, got r = {r}, R = {radius}",
                          context={'operation': 'cc_sphere_profile'})
    kappa = vertical_kappa(as_published)
    c = _cc_profile_c(radius, r)
    if c <= 0.0:
        raise DomainError("Radius is too close to the equator", context={'operation': 'cc_sphere_profile'})
    x = c * radius
    _, f = _cc_parts(radius, c, kappa)

    if mode == 'fd':
        h = step * c
        p1, p2 = _cc_parts(radius, c + h, kappa)
        m1, m2 = _cc_parts(radius, c - h, kappa)
        c1, c2 = _cc_parts(radius, c, kappa)
        f1p, f2p = (p1 - m1) / (2.0 * h), (p2 - m2) / (2.0 * h)
        f1pp, f2pp = (p1 - 2.0 * c1 + m1) / (h * h), (p2 - 2.0 * c2 + m2) / (h * h)
    elif mode == 'analytic':
        s, co = math.sin(0.5 * x), math.cos(0.5 * x)
        f1p = -2.0 * s / c ** 2 + radius * co / c
        f1pp = 4.0 * s / c ** 3 - 2.0 * radius * co / c ** 2 - radius ** 2 * s / (2.0 * c)
        one_minus_cos = 1.0 - math.cos(x)
        x_minus_sin = x - math.sin(x)
        f2p = kappa * (radius * one_minus_cos / c ** 2 - 2.0 * x_minus_sin / c ** 3)
        f2pp = kappa * (radius ** 2 * math.sin(x) / c ** 2 - 4.0 * radius * one_minus_cos / c ** 3
                        + 6.0 * x_minus_sin / c ** 4)
    else:
        raise ValueError(f"Unknown differentiation mode: {mode}")

    fprime = f2p / f1p
    fsecond = (f2pp * f1p - f2p * f1pp) / f1p ** 3
    return f, fprime, fsecond


def cc_sphere_radial_profile(
    radius: float,
    as_published: bool = False,
    mode: str = 'analytic',
    step: float = CC_PROFILE_STEP
) -> RadialProfile:
    def component(index: int) -> Callable[[float], float]:
        return lambda r: cc_sphere_profile(radius, r, as_published, mode, step)[index]

    return RadialProfile(component(0), component(1), component(2), name=f'cc-sphere(R={radius:g})')


def cc_profile_step_halving(
    radius: float,
    r: float,
    as_published: bool = False,
    step: float = CC_PROFILE_STEP
) -> StepHalvingReport:
    """HMC of the CC sphere from c-differences with step and with step / 2."""
    coarse = hmc_profile(cc_sphere_radial_profile(radius, as_published, 'fd', step), r)
    fine = hmc_profile(cc_sphere_radial_profile(radius, as_published, 'fd', 0.5 * step), r)
    return _halving(coarse, fine)
