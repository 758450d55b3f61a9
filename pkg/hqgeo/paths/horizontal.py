"""
Explicit horizontal connectivity.

A vertical connector joins the origin to (0, t) with eight straight horizontal
moves along +k_1 xi_1, .., +k_4 xi_4 followed by -k_1 xi_1, .., -k_4 xi_4. The
coefficients solve

    k1 k2 + k3 k4 = tau_1,   k1 k3 - k2 k4 = tau_2,   k2 k3 + k1 k4 = tau_3

with tau = -t/4. Two arbitrary points are joined by lifting the straight
horizontal segment between them and closing the vertical gap with a
left-translated connector.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import cumulative_simpson, simpson

from hqgeo.algebra.quaternion import PureQuaternion, conj_array, hamilton
from hqgeo.group.heisenberg import HeisPoint, compose_array
from hqgeo.paths.curve import CurveSegment, SampledCurve
from hqgeo.utils.exceptions import InputError, SolverError
from hqgeo.utils.logger import log_warning_with_context


logger = logging.getLogger(__name__)

SEGMENT_SAMPLES = 257
PHI_GRID_SIZE = 720
RELATION_TOLERANCE = 1e-10
CONNECTOR_GAP_RTOL = 1e-14

PlanarCurve = Union[Callable[[np.ndarray], np.ndarray], np.ndarray]


def bilinear_relations(k: Sequence[float]) -> np.ndarray:
    k1, k2, k3, k4 = k
    return np.array([k1 * k2 + k3 * k4, k1 * k3 - k2 * k4, k2 * k3 + k1 * k4])


def _stable_roots(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Roots of a X^2 + b X + c per row without cancellation; NaN where complex."""
    disc = b * b - 4.0 * a * c
    sqrt_disc = np.sqrt(np.where(disc >= 0.0, disc, np.nan))
    qq = -0.5 * (b + np.copysign(sqrt_disc, b))
    with np.errstate(divide='ignore', invalid='ignore'):
        root1 = qq / a
        root2 = c / qq
    return disc, root1, root2


def solve_vertical_coeffs(t: PureQuaternion) -> np.ndarray:
    """
    Coefficients k_1..k_4 of the vertical connector reaching (0, t).

    Writes tau_2 + i tau_3 = R e^{i phi} and scans phi_1 over [0, pi) for a
    positive root X = r_1^2 of

        sin(2 phi_1) X^2 - 2 tau_1 X + R^2 sin(2 phi - 2 phi_1) = 0

    keeping the largest discriminant. R = 0 and tau_1 = 0 have closed forms.

    Args:
        t: Vertical target

    Returns:
        Array (k1, k2, k3, k4)

    Raises:
        SolverError: If no grid angle yields a positive root
    """
    tau = -t.as_array() / 4.0
    tau1, tau2, tau3 = tau
    if not np.any(tau):
        return np.zeros(4)

    radius = math.hypot(tau2, tau3)
    if radius == 0.0:
        root = math.sqrt(abs(tau1))
        return np.array([0.0, 0.0, root, math.copysign(root, tau1)])

    phi = math.atan2(tau3, tau2)
    if tau1 == 0.0:
        phi1 = 0.5 * phi + 0.25 * math.pi
        x_root = radius
    else:
        phi1, x_root = _scan_phi1(tau1, radius, phi)

    r1 = math.sqrt(x_root)
    r2 = radius / r1
    phi2 = phi - phi1
    k = np.array([r1 * math.cos(phi1), r1 * math.sin(phi1), r2 * math.cos(phi2), r2 * math.sin(phi2)])

    residual = float(np.max(np.abs(bilinear_relations(k) - tau)))
    if residual > RELATION_TOLERANCE * max(1.0, float(np.max(np.abs(tau)))):
        raise SolverError(
            "Vertical connector coefficients do not meet the bilinear relations",
            context={'operation': 'solve_vertical_coeffs', 'residual': residual}
        )
    return k


def _scan_phi1(tau1: float, radius: float, phi: float) -> Tuple[float, float]:
    phi1 = np.arange(PHI_GRID_SIZE) * (math.pi / PHI_GRID_SIZE)
    a = np.sin(2.0 * phi1)
    b = np.full_like(phi1, -2.0 * tau1)
    c = radius * radius * np.sin(2.0 * phi - 2.0 * phi1)
    disc, root1, root2 = _stable_roots(a, b, c)

    roots = np.stack([root1, root2], axis=-1)
    positive = np.isfinite(roots) & (roots > 0.0)
    # Among positive roots prefer r_1 close to r_2, i.e. X close to R.
    balance = np.where(positive, np.abs(np.log(np.where(positive, roots, 1.0) / radius)), np.inf)
    best_root = np.argmin(balance, axis=-1)
    usable = positive.any(axis=-1) & np.isfinite(disc)
    if not usable.any():
        log_warning_with_context(logger, "No positive root on the phi_1 grid",
                                 {'operation': 'solve_vertical_coeffs', 'params': {'tau1': tau1, 'R': radius}})
        raise SolverError("phi_1 scan found no positive root", context={'tau1': tau1, 'R': radius})
    idx = int(np.argmax(np.where(usable, disc, -np.inf)))
    return float(phi1[idx]), float(roots[idx, best_root[idx]])


@dataclass(frozen=True)
class VerticalConnectorPlan:
    """Coefficients k_1..k_4 and the corner points p_0 = O, p_1, .., p_8."""
    k: Tuple[float, float, float, float]
    points: Tuple[HeisPoint, ...]

    @classmethod
    def from_coeffs(cls, k: Sequence[float]) -> 'VerticalConnectorPlan':
        k = tuple(float(c) for c in k)
        current = np.zeros(7)
        corners = [HeisPoint.origin()]
        for index, coeff in _moves(k):
            step = np.zeros(7)
            step[index] = coeff
            current = compose_array(current, step)
            corners.append(HeisPoint.from_array(current))
        return cls(k, tuple(corners))

    @property
    def target(self) -> HeisPoint:
        return self.points[-1]


def _moves(k: Sequence[float]) -> List[Tuple[int, float]]:
    return [(i, k[i]) for i in range(4)] + [(i, -k[i]) for i in range(4)]


def _straight_move(start: np.ndarray, index: int, coeff: float, samples: int) -> CurveSegment:
    """Flow of coeff * xi_index from start: s -> start * (s coeff e_index, 0)."""
    s = np.linspace(0.0, 1.0, samples)
    steps = np.zeros((samples, 7))
    steps[:, index] = coeff * s
    points = compose_array(start, steps)
    direction = np.zeros(4)
    direction[index] = coeff
    prod = hamilton(points[:, :4], conj_array(direction))
    velocities = np.concatenate([np.tile(direction, (samples, 1)), 2.0 * prod[:, 1:]], axis=-1)
    return CurveSegment(s, points, velocities)


def connector_segments(
    plan: VerticalConnectorPlan,
    start: Optional[HeisPoint] = None,
    samples: int = SEGMENT_SAMPLES
) -> List[CurveSegment]:
    """Non-degenerate moves of a plan, left-translated to begin at start."""
    current = (start or HeisPoint.origin()).as_array()
    segments = []
    for index, coeff in _moves(plan.k):
        if coeff == 0.0:
            continue
        seg = _straight_move(current, index, coeff, samples)
        segments.append(seg)
        current = seg.points[-1]
    return segments


def vertical_connector(t: PureQuaternion, samples: int = SEGMENT_SAMPLES) -> SampledCurve:
    """Horizontal curve from the origin to (0, t)."""
    plan = VerticalConnectorPlan.from_coeffs(solve_vertical_coeffs(t))
    segments = connector_segments(plan, samples=samples)
    if not segments:
        return SampledCurve.constant(HeisPoint.origin())
    return SampledCurve.from_segments(segments)


def _lift_arrays(
    alpha: np.ndarray,
    alpha_dot: np.ndarray,
    lam: np.ndarray,
    start: HeisPoint
) -> Tuple[np.ndarray, np.ndarray]:
    integrand = 2.0 * hamilton(alpha, conj_array(alpha_dot))[:, 1:]
    beta = start.t.as_array() + cumulative_simpson(integrand, x=lam, axis=0, initial=0.0)
    return np.concatenate([alpha, beta], axis=-1), np.concatenate([alpha_dot, integrand], axis=-1)


def horizontal_lift(
    alpha: PlanarCurve,
    start: HeisPoint,
    alpha_dot: Optional[PlanarCurve] = None,
    samples: int = SEGMENT_SAMPLES
) -> SampledCurve:
    """
    Lift a curve in H to the horizontal curve starting at start.

    The vertical part integrates beta' = 2 Im(alpha conj(alpha')), which is
    theta(gamma') = 0 written out.

    Args:
        alpha: Callable lambda -> (N, 4) array, or an (N, 4) array sampled on
            a uniform grid of [0, 1]
        start: Start point; its horizontal part must equal alpha(0)
        alpha_dot: Derivative of alpha in the same form; central differences
            of the samples are used when omitted
        samples: Grid size when alpha is a callable

    Returns:
        Horizontal SampledCurve above alpha

    Raises:
        InputError: If alpha(0) differs from the horizontal part of start
    """
    if callable(alpha):
        lam = np.linspace(0.0, 1.0, samples)
        a = np.asarray(alpha(lam), dtype=float)
    else:
        a = np.asarray(alpha, dtype=float)
        lam = np.linspace(0.0, 1.0, a.shape[0])
    if alpha_dot is None:
        ad = np.gradient(a, lam, axis=0, edge_order=2)
    elif callable(alpha_dot):
        ad = np.asarray(alpha_dot(lam), dtype=float)
    else:
        ad = np.asarray(alpha_dot, dtype=float)

    q0 = start.q.as_array()
    if np.max(np.abs(a[0] - q0)) > 1e-12 * max(1.0, float(np.max(np.abs(q0)))):
        raise InputError(
            "Planar curve does not start at the horizontal part of the start point",
            context={'operation': 'horizontal_lift', 'point': a[0].tolist()}
        )

    points, velocities = _lift_arrays(a, ad, lam, start)
    return SampledCurve(lam, points, velocities)


def _straight_lift_segment(p: HeisPoint, q_end: np.ndarray, samples: int) -> CurveSegment:
    s = np.linspace(0.0, 1.0, samples)
    q_start = p.q.as_array()
    d = q_end - q_start
    alpha = q_start + s[:, None] * d
    alpha_dot = np.tile(d, (samples, 1))
    points, velocities = _lift_arrays(alpha, alpha_dot, s, p)
    return CurveSegment(s, points, velocities)


def connect(p_from: HeisPoint, p_to: HeisPoint, samples: int = SEGMENT_SAMPLES) -> SampledCurve:
    """
    Horizontal curve from p_from to p_to.

    Lifts the straight segment between the horizontal parts, then closes the
    remaining vertical gap with a vertical connector translated to the end of
    the lift. A gap within rounding of the lift (CONNECTOR_GAP_RTOL relative to
    1 + |dq|^2 + |t|) is snapped onto the target instead.
    """
    if p_from.is_close(p_to, 0.0):
        return SampledCurve.constant(p_from)

    segments: List[CurveSegment] = []
    q_end = p_to.q.as_array()
    lift_end = p_from
    if np.any(q_end != p_from.q.as_array()):
        lift = _straight_lift_segment(p_from, q_end, samples)
        segments.append(lift)
        lift_end = HeisPoint.from_array(lift.points[-1])

    t_end = p_to.t.as_array()
    gap = t_end - lift_end.t.as_array()
    scale = 1.0 + float(np.sum((q_end - p_from.q.as_array()) ** 2)) + float(np.max(np.abs(t_end)))
    if np.max(np.abs(gap)) <= CONNECTOR_GAP_RTOL * scale:
        if segments:
            segments[-1].points[-1, 4:] = t_end
    else:
        plan = VerticalConnectorPlan.from_coeffs(solve_vertical_coeffs(PureQuaternion.from_array(gap)))
        segments.extend(connector_segments(plan, start=lift_end, samples=samples))

    if not segments:
        return SampledCurve.constant(p_from)
    return SampledCurve.from_segments(segments)


def length_cc(curve: SampledCurve) -> float:
    """Horizontal length, Simpson's rule on each smooth segment of |(pi o gamma)'|."""
    if curve.velocities is None:
        raise InputError("Curve has no velocities", context={'operation': 'length_cc'})
    speed = np.linalg.norm(curve.velocities[:, :4], axis=-1)
    total = 0.0
    for piece in curve.segment_slices():
        total += float(simpson(speed[piece], x=curve.lam[piece]))
    return total
