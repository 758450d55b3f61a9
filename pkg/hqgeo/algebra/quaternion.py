"""
Quaternion algebra on value types and on stacked numpy arrays.

Component order is (w, x, y, z) for w + x i + y j + z k. Pure quaternions
double as vectors of R^3 with t = t1 i + t2 j + t3 k.

The array helpers operate on arrays of shape (..., 4) and broadcast, so whole
sampled curves are multiplied in one call.
"""
import math
import numbers
from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from hqgeo.utils.exceptions import DomainError


SINC_SERIES_THRESHOLD = 1e-8
F_RATIO_SERIES_THRESHOLD = 1e-1

Scalar = Union[float, numbers.Real]


@dataclass(frozen=True)
class Quaternion:
    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def from_array(cls, values: Iterable[float]) -> 'Quaternion':
        w, x, y, z = (float(v) for v in values)
        return cls(w, x, y, z)

    @classmethod
    def real(cls, value: float) -> 'Quaternion':
        return cls(float(value), 0.0, 0.0, 0.0)

    def as_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z], dtype=float)

    def conj(self) -> 'Quaternion':
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm_squared(self) -> float:
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def norm(self) -> float:
        return math.sqrt(self.norm_squared())

    def imag(self) -> 'PureQuaternion':
        return PureQuaternion(self.x, self.y, self.z)

    def __add__(self, other: 'Quaternion') -> 'Quaternion':
        other = as_quaternion(other)
        return Quaternion(self.w + other.w, self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: 'Quaternion') -> 'Quaternion':
        other = as_quaternion(other)
        return Quaternion(self.w - other.w, self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> 'Quaternion':
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other):
        if isinstance(other, numbers.Real):
            other = float(other)
            return Quaternion(self.w * other, self.x * other, self.y * other, self.z * other)
        return multiply(self, as_quaternion(other))

    def __rmul__(self, other):
        if isinstance(other, numbers.Real):
            return self.__mul__(other)
        return multiply(as_quaternion(other), self)

    def __truediv__(self, other: Scalar) -> 'Quaternion':
        return self * (1.0 / other)

    def is_close(self, other: 'Quaternion', tol: float = 1e-12) -> bool:
        return float(np.max(np.abs(self.as_array() - as_quaternion(other).as_array()))) <= tol


@dataclass(frozen=True)
class PureQuaternion:
    """Imaginary quaternion; the real part is zero by construction."""
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def from_array(cls, values: Iterable[float]) -> 'PureQuaternion':
        x, y, z = (float(v) for v in values)
        return cls(x, y, z)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    def as_quaternion(self) -> Quaternion:
        return Quaternion(0.0, self.x, self.y, self.z)

    def norm_squared(self) -> float:
        return self.x * self.x + self.y * self.y + self.z * self.z

    def norm(self) -> float:
        return math.sqrt(self.norm_squared())

    def __add__(self, other: 'PureQuaternion') -> 'PureQuaternion':
        return PureQuaternion(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: 'PureQuaternion') -> 'PureQuaternion':
        return PureQuaternion(self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> 'PureQuaternion':
        return PureQuaternion(-self.x, -self.y, -self.z)

    def __mul__(self, other):
        if isinstance(other, numbers.Real):
            other = float(other)
            return PureQuaternion(self.x * other, self.y * other, self.z * other)
        return multiply(self.as_quaternion(), as_quaternion(other))

    def __rmul__(self, other):
        if isinstance(other, numbers.Real):
            return self.__mul__(other)
        return multiply(as_quaternion(other), self.as_quaternion())


QuaternionLike = Union[Quaternion, PureQuaternion, numbers.Real]

ONE = Quaternion(1.0, 0.0, 0.0, 0.0)
UNIT_I = Quaternion(0.0, 1.0, 0.0, 0.0)
UNIT_J = Quaternion(0.0, 0.0, 1.0, 0.0)
UNIT_K = Quaternion(0.0, 0.0, 0.0, 1.0)


def as_quaternion(value: QuaternionLike) -> Quaternion:
    if isinstance(value, Quaternion):
        return value
    if isinstance(value, PureQuaternion):
        return value.as_quaternion()
    if isinstance(value, numbers.Real):
        return Quaternion.real(float(value))
    raise TypeError(f"Cannot interpret {type(value).__name__} as a quaternion")


def multiply(p: Quaternion, q: Quaternion) -> Quaternion:
    """Hamilton product p*q."""
    p = as_quaternion(p)
    q = as_quaternion(q)
    return Quaternion(
        p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
        p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
        p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
        p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
    )


def conj(q: QuaternionLike) -> Quaternion:
    return as_quaternion(q).conj()


def inverse(q: QuaternionLike) -> Quaternion:
    """
    Multiplicative inverse q^-1 = conj(q)/|q|^2.

    Raises:
        DomainError: If q is the zero quaternion
    """
    q = as_quaternion(q)
    n2 = q.norm_squared()
    if n2 == 0.0:
        raise DomainError("Zero quaternion has no inverse", context={'operation': 'inverse'})
    return q.conj() * (1.0 / n2)


def exp_pure(v: PureQuaternion) -> Quaternion:
    """
    Exponential of a pure quaternion, cos|v| + (v/|v|) sin|v|.

    Uses the series-safe sinc so exp_pure(0) is exactly 1.
    """
    angle = v.norm()
    s = sinc(angle)
    return Quaternion(math.cos(angle), v.x * s, v.y * s, v.z * s)


def sinc(x: float) -> float:
    """Unnormalized sin(x)/x with sinc(0) = 1."""
    if abs(x) < SINC_SERIES_THRESHOLD:
        x2 = x * x
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0 - x2 * x2 * x2 / 5040.0
    return math.sin(x) / x


def vers(x: float) -> float:
    """(1 - cos x)/x^2, evaluated as sinc(x/2)^2/2 to avoid cancellation."""
    half = sinc(0.5 * x)
    return 0.5 * half * half


def f_ratio(x: float) -> float:
    """(x - sin x)/x^3 with the small-argument series below 0.1."""
    if abs(x) < F_RATIO_SERIES_THRESHOLD:
        x2 = x * x
        return (1.0 / 6.0 - x2 / 120.0 + x2 * x2 / 5040.0
                - x2 * x2 * x2 / 362880.0 + x2 * x2 * x2 * x2 / 39916800.0)
    return (x - math.sin(x)) / (x * x * x)


def lambda_minus_sin(x: float) -> float:
    """x - sin x without cancellation."""
    return x * x * x * f_ratio(x)


def hamilton(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Hamilton product of broadcastable (..., 4) arrays."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    pw, px, py, pz = p[..., 0], p[..., 1], p[..., 2], p[..., 3]
    qw, qx, qy, qz = q[..., 0], q[..., 1], q[..., 2], q[..., 3]
    return np.stack([
        pw * qw - px * qx - py * qy - pz * qz,
        pw * qx + px * qw + py * qz - pz * qy,
        pw * qy - px * qz + py * qw + pz * qx,
        pw * qz + px * qy - py * qx + pz * qw,
    ], axis=-1)


def conj_array(q: np.ndarray) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    return q * np.array([1.0, -1.0, -1.0, -1.0])


def pure_to_array(t: np.ndarray) -> np.ndarray:
    """Embed (..., 3) vectors as (..., 4) pure quaternions."""
    t = np.asarray(t, dtype=float)
    zeros = np.zeros(t.shape[:-1] + (1,))
    return np.concatenate([zeros, t], axis=-1)


def inverse_array(q: np.ndarray) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    n2 = np.sum(q * q, axis=-1, keepdims=True)
    if np.any(n2 == 0.0):
        raise DomainError("Zero quaternion has no inverse", context={'operation': 'inverse_array'})
    return conj_array(q) / n2


def sinc_array(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < SINC_SERIES_THRESHOLD
    safe = np.where(small, 1.0, x)
    x2 = x * x
    series = 1.0 - x2 / 6.0 + x2 * x2 / 120.0 - x2 * x2 * x2 / 5040.0
    return np.where(small, series, np.sin(safe) / safe)


def vers_array(x: np.ndarray) -> np.ndarray:
    half = sinc_array(0.5 * np.asarray(x, dtype=float))
    return 0.5 * half * half


def f_ratio_array(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < F_RATIO_SERIES_THRESHOLD
    safe = np.where(small, 1.0, x)
    x2 = x * x
    series = (1.0 / 6.0 - x2 / 120.0 + x2 * x2 / 5040.0
              - x2 * x2 * x2 / 362880.0 + x2 * x2 * x2 * x2 / 39916800.0)
    return np.where(small, series, (safe - np.sin(safe)) / (safe * safe * safe))


def exp_pure_array(v: np.ndarray) -> np.ndarray:
    """exp of (..., 3) pure vectors, returned as (..., 4) quaternions."""
    v = np.asarray(v, dtype=float)
    angle = np.linalg.norm(v, axis=-1)
    s = sinc_array(angle)[..., None]
    return np.concatenate([np.cos(angle)[..., None], v * s], axis=-1)
