"""
The quaternionic Heisenberg group H x Im H.

Group law, with compose(a, b) = a * b and a = (q', t'):

    (q', t') * (q, t) = (q' + q, t' + t + 2 Im(q' conj(q)))

With this twist the frame xi_1..xi_4 is left-invariant and (q, t) -> (qU, t)
is an automorphism. The mirrored twist 2 Im(conj(q) q') is available with
as_published=True for comparison output.
"""
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Iterable, Mapping, Union

import numpy as np

from hqgeo.algebra.quaternion import (
    PureQuaternion,
    Quaternion,
    as_quaternion,
    inverse,
    multiply,
)
from hqgeo.utils.exceptions import DomainError, ParameterError


UNIT_TOLERANCE = 1e-12


@dataclass(frozen=True)
class HeisPoint:
    q: Quaternion = Quaternion()
    t: PureQuaternion = PureQuaternion()

    @classmethod
    def origin(cls) -> 'HeisPoint':
        return cls(Quaternion(), PureQuaternion())

    @classmethod
    def from_array(cls, values: Iterable[float]) -> 'HeisPoint':
        """Build from coordinates x1, x2, x3, x4, t1, t2, t3."""
        arr = np.asarray(list(values), dtype=float)
        if arr.shape != (7,):
            raise ParameterError(f"A point needs 7 coordinates, got {arr.size}")
        return cls(Quaternion.from_array(arr[:4]), PureQuaternion.from_array(arr[4:]))

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.q.as_array(), self.t.as_array()])

    def is_origin(self) -> bool:
        return self.q.norm_squared() == 0.0 and self.t.norm_squared() == 0.0

    def is_close(self, other: 'HeisPoint', tol: float = 1e-12) -> bool:
        return float(np.max(np.abs(self.as_array() - other.as_array()))) <= tol


@dataclass(frozen=True)
class MetricScale:
    delta: float

    def __post_init__(self):
        if not (math.isfinite(self.delta) and self.delta > 0.0):
            raise ParameterError(f"Dilation factor must be positive and finite, got {self.delta}")


class AutomorphismKind(Enum):
    TRANSLATION = 'translation'
    ROTATION = 'rotation'
    SP1 = 'sp1'
    INVERSION = 'inversion'
    DILATION = 'dilation'


def twist_array(q_left: np.ndarray, q_right: np.ndarray, as_published: bool = False) -> np.ndarray:
    """
    2 Im(q' conj(q)) on broadcastable (..., 4) arrays, written out per component.

    For q' = (w', v') and q = (w, v) this is 2 (w v' - w' v - v' x v); the
    mirrored ordering flips the sign of the cross product. Equal or opposite
    arguments give an exact zero.
    """
    w_left, v_left = q_left[..., :1], q_left[..., 1:]
    w_right, v_right = q_right[..., :1], q_right[..., 1:]
    cross = np.cross(v_left, v_right)
    linear = w_right * v_left - w_left * v_right
    return 2.0 * (linear + cross if as_published else linear - cross)


def twist(q_left: Quaternion, q_right: Quaternion, as_published: bool = False) -> PureQuaternion:
    """Vertical twist term of the group law for the two horizontal parts."""
    return PureQuaternion.from_array(twist_array(q_left.as_array(), q_right.as_array(), as_published))


def compose(a: HeisPoint, b: HeisPoint, as_published: bool = False) -> HeisPoint:
    """
    Group product a * b.

    Args:
        a: Left operand (q', t')
        b: Right operand (q, t)
        as_published: Use the mirrored twist 2 Im(conj(q) q')

    Returns:
        The product point
    """
    return HeisPoint(a.q + b.q, a.t + b.t + twist(a.q, b.q, as_published))


def invert(p: HeisPoint) -> HeisPoint:
    return HeisPoint(-p.q, -p.t)


def compose_array(a: np.ndarray, b: np.ndarray, as_published: bool = False) -> np.ndarray:
    """Group product on broadcastable (..., 7) coordinate arrays."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    q = a[..., :4] + b[..., :4]
    t = a[..., 4:] + b[..., 4:] + twist_array(a[..., :4], b[..., :4], as_published)
    return np.concatenate([q, t], axis=-1)


def _require_unit(u: Quaternion, name: str) -> Quaternion:
    u = as_quaternion(u)
    if abs(u.norm() - 1.0) >= UNIT_TOLERANCE:
        raise ParameterError(
            f"{name} must be a unit quaternion, |{name}| = {u.norm():.16g}",
            context={'operation': 'automorphism', 'params': {name: u.as_array().tolist()}}
        )
    return u


def left_translate(g: HeisPoint, p: HeisPoint) -> HeisPoint:
    return compose(g, p)


def rotate(u: Quaternion, p: HeisPoint) -> HeisPoint:
    """Right multiplication (q, t) -> (qU, t) by a unit quaternion."""
    u = _require_unit(u, 'U')
    return HeisPoint(multiply(p.q, u), p.t)


def sp1_act(sigma: Quaternion, p: HeisPoint) -> HeisPoint:
    """Sp(1) action (q, t) -> (sigma q, sigma t sigma^-1)."""
    sigma = _require_unit(sigma, 'sigma')
    t_rot = multiply(multiply(sigma, p.t.as_quaternion()), sigma.conj())
    return HeisPoint(multiply(sigma, p.q), t_rot.imag())


def inversion(p: HeisPoint) -> HeisPoint:
    """
    Inversion I(q, t) = (-(|q|^2 - t)^-1 q, -t/(|q|^4 + |t|^2)).

    Raises:
        DomainError: At the origin
    """
    if p.is_origin():
        raise DomainError("Inversion is undefined at the origin", context={'operation': 'inversion'})
    r2 = p.q.norm_squared()
    w = Quaternion(r2, -p.t.x, -p.t.y, -p.t.z)
    q_new = -multiply(inverse(w), p.q)
    t_new = -p.t * (1.0 / (r2 * r2 + p.t.norm_squared()))
    return HeisPoint(q_new, t_new)


def dilate(scale: Union[MetricScale, float], p: HeisPoint) -> HeisPoint:
    if not isinstance(scale, MetricScale):
        scale = MetricScale(float(scale))
    d = scale.delta
    return HeisPoint(p.q * d, p.t * (d * d))


def automorphism(kind: Union[AutomorphismKind, str], params: Mapping[str, Any], p: HeisPoint) -> HeisPoint:
    """
    Apply one of the generating automorphisms.

    Args:
        kind: Which map to apply
        params: 'g' for translation, 'U' for rotation, 'sigma' for the Sp(1)
            action, 'delta' for dilation; inversion takes none
        p: Point to map

    Returns:
        The image of p

    Raises:
        ParameterError: Missing or invalid parameter
        DomainError: Inversion at the origin
    """
    kind = AutomorphismKind(kind)
    try:
        if kind is AutomorphismKind.TRANSLATION:
            return left_translate(params['g'], p)
        if kind is AutomorphismKind.ROTATION:
            return rotate(params['U'], p)
        if kind is AutomorphismKind.SP1:
            return sp1_act(params['sigma'], p)
        if kind is AutomorphismKind.DILATION:
            return dilate(params['delta'], p)
    except KeyError as e:
        raise ParameterError(f"Missing parameter {e} for {kind.value}", original_exception=e)
    return inversion(p)


def koranyi_gauge(p: HeisPoint) -> float:
    """(|q|^4 + |t|^2)^(1/4)."""
    r2 = p.q.norm_squared()
    return (r2 * r2 + p.t.norm_squared()) ** 0.25


def koranyi_gauge_array(points: np.ndarray) -> np.ndarray:
    points = np.asarray(points, dtype=float)
    r2 = np.sum(points[..., :4] ** 2, axis=-1)
    return (r2 * r2 + np.sum(points[..., 4:] ** 2, axis=-1)) ** 0.25


def koranyi_distance(a: HeisPoint, b: HeisPoint) -> float:
    return koranyi_gauge(compose(invert(a), b))


def inversion_distortion(a: HeisPoint, b: HeisPoint) -> float:
    """
    d_K(I a, I b) * |a|_K * |b|_K / d_K(a, b).

    Equals 1 when the inversion acts conformally on the Koranyi distance.
    """
    base = koranyi_distance(a, b)
    if a == b or base == 0.0:
        raise DomainError("Distortion needs two distinct points", context={'operation': 'inversion_distortion'})
    image = koranyi_distance(inversion(a), inversion(b))
    return image * koranyi_gauge(a) * koranyi_gauge(b) / base
