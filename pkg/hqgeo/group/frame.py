"""
Left-invariant frame, contact forms and derivatives of scalar fields along the frame.

The horizontal fields are

    xi_i = d/dx_i + sum_a M[i, a](x) d/dt_a,    M[i, a](x) = sum_k D[i, a, k] x_k

and T_a = d/dt_a. The vertical part of xi_i at (q, t) is 2 Im(q conj(e_i)) for
the quaternion units e_1..e_4 = 1, i, j, k. Contact forms are
theta_a = dt_a - sum_i M[i, a] dx_i, dual to the frame.
"""
import logging
import math
from dataclasses import dataclass, replace
from typing import TYPE_CHECKING, Callable, Optional, Sequence, Tuple

import numpy as np

from hqgeo.group.heisenberg import HeisPoint
from hqgeo.utils.exceptions import EvaluationError, InputError, ParameterError

if TYPE_CHECKING:
    from hqgeo.paths.curve import SampledCurve


logger = logging.getLogger(__name__)

# D[i, a, k]: coefficient of x_k in the d/dt_a component of xi_i.
XI_COEFFS = np.array([
    [[0, 2, 0, 0], [0, 0, 2, 0], [0, 0, 0, 2]],
    [[-2, 0, 0, 0], [0, 0, 0, -2], [0, 0, 2, 0]],
    [[0, 0, 0, 2], [-2, 0, 0, 0], [0, -2, 0, 0]],
    [[0, 0, -2, 0], [0, 2, 0, 0], [-2, 0, 0, 0]],
], dtype=float)

# Column i is the image of xi_{i+1}.
J_MATRICES = np.array([
    [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]],
    [[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]],
    [[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]],
], dtype=float)

FIRST_DERIVATIVE_STEP = 1e-5
SECOND_DERIVATIVE_STEP = 1e-4
FRAME_LABELS = ('xi1', 'xi2', 'xi3', 'xi4', 'T1', 'T2', 'T3')


def _coords(p) -> np.ndarray:
    if isinstance(p, HeisPoint):
        return p.as_array()
    arr = np.asarray(p, dtype=float)
    if arr.shape[-1] != 7:
        raise InputError(f"Expected 7 coordinates, got shape {arr.shape}")
    return arr


def vertical_coefficients(x) -> np.ndarray:
    """M[i, a] at the coordinates x; broadcasts over leading axes."""
    x = _coords(x)
    return np.einsum('iak,...k->...ia', XI_COEFFS, x[..., :4])


@dataclass(frozen=True)
class FrameVector:
    """Tangent vector sum h_i xi_i(base) + sum v_a T_a."""
    base: HeisPoint
    h: Tuple[float, float, float, float]
    v: Tuple[float, float, float] = (0.0, 0.0, 0.0)

    @classmethod
    def from_coordinates(cls, base: HeisPoint, w: Sequence[float]) -> 'FrameVector':
        w = np.asarray(w, dtype=float)
        return cls(base, tuple(float(c) for c in w[:4]), tuple(float(c) for c in theta_eval(base, w)))

    @classmethod
    def basis(cls, index: int, base: Optional[HeisPoint] = None) -> 'FrameVector':
        """Frame vector number index in 1..7 (xi_1..xi_4, T_1..T_3)."""
        _check_index(index, 7)
        coeffs = np.zeros(7)
        coeffs[index - 1] = 1.0
        return cls(base or HeisPoint.origin(), tuple(coeffs[:4]), tuple(coeffs[4:]))

    def coefficients(self) -> np.ndarray:
        return np.concatenate([np.asarray(self.h, dtype=float), np.asarray(self.v, dtype=float)])

    def to_coordinates(self) -> np.ndarray:
        return self.coefficients() @ frame_matrix(self.base)


def _check_index(index: int, upper: int):
    if not 1 <= index <= upper:
        raise ParameterError(f"Frame index must lie in 1..{upper}, got {index}")


def frame_matrix(p) -> np.ndarray:
    """Rows are the coordinate components of xi_1..xi_4, T_1..T_3 at p."""
    m = vertical_coefficients(p)
    frame = np.eye(7)
    frame[:4, 4:] = m
    return frame


def coframe_matrix(p) -> np.ndarray:
    """Rows are dx_1..dx_4, theta_1..theta_3 at p."""
    m = vertical_coefficients(p)
    coframe = np.eye(7)
    coframe[4:, :4] = -m.T
    return coframe


def theta_eval(p, w: Sequence[float]) -> np.ndarray:
    """(theta_1(w), theta_2(w), theta_3(w)) at p for a coordinate vector w."""
    w = np.asarray(w, dtype=float)
    return w[4:] - w[:4] @ vertical_coefficients(p)


def theta_array(points: np.ndarray, velocities: np.ndarray) -> np.ndarray:
    """Contact forms on stacked (N, 7) points and velocities."""
    m = vertical_coefficients(np.asarray(points, dtype=float))
    velocities = np.asarray(velocities, dtype=float)
    return velocities[..., 4:] - np.einsum('...i,...ia->...a', velocities[..., :4], m)


def dtheta(a: int, p, x_vec: Sequence[float], y_vec: Sequence[float], step: float = 1.0) -> float:
    """
    Exterior derivative d theta_a (X, Y) = 1/2 sum (d_k theta_l - d_l theta_k) X^k Y^l.

    The coefficient derivatives come from central differences of the coframe,
    which are exact because the coefficients are linear in x.
    """
    _check_index(a, 3)
    base = _coords(p)
    jac = np.zeros((7, 7))
    for k in range(7):
        e = np.zeros(7)
        e[k] = step
        jac[k] = (coframe_matrix(base + e)[3 + a] - coframe_matrix(base - e)[3 + a]) / (2.0 * step)
    skew = 0.5 * (jac - jac.T)
    return float(np.asarray(x_vec, dtype=float) @ skew @ np.asarray(y_vec, dtype=float))


def lie_bracket(i: int, j: int) -> FrameVector:
    """[E_i, E_j] for frame indices 1..7, constant in the frame."""
    _check_index(i, 7)
    _check_index(j, 7)
    v = np.zeros(3)
    if i <= 4 and j <= 4:
        v = XI_COEFFS[j - 1, :, i - 1] - XI_COEFFS[i - 1, :, j - 1]
    return FrameVector(HeisPoint.origin(), (0.0, 0.0, 0.0, 0.0), tuple(float(c) for c in v))


def bracket_by_differentiation(i: int, j: int, p, step: float = 1.0) -> np.ndarray:
    """
    Coordinate components of [E_i, E_j] at p from X(Y^k) - Y(X^k).

    Independent of lie_bracket: only the frame rows are differentiated.
    """
    _check_index(i, 7)
    _check_index(j, 7)
    base = _coords(p)
    frame = frame_matrix(base)

    def directional(direction: np.ndarray, row: int) -> np.ndarray:
        return (frame_matrix(base + step * direction)[row]
                - frame_matrix(base - step * direction)[row]) / (2.0 * step)

    return directional(frame[i - 1], j - 1) - directional(frame[j - 1], i - 1)


def j_apply(a: int, h: Sequence[float]) -> np.ndarray:
    """Apply the almost complex structure J_a to horizontal frame coefficients."""
    _check_index(a, 3)
    return J_MATRICES[a - 1] @ np.asarray(h, dtype=float)


@dataclass(frozen=True)
class ScalarField:
    """
    Scalar field on R^7 with optional analytic derivatives.

    Missing derivatives are completed by central differences with steps
    fd_step * max(1, |x_k|) for gradients and fd_step_hessian * max(1, |x_k|)
    for Hessians.
    """
    value: Callable[[np.ndarray], float]
    gradient: Optional[Callable[[np.ndarray], np.ndarray]] = None
    hessian: Optional[Callable[[np.ndarray], np.ndarray]] = None
    fd_step: float = FIRST_DERIVATIVE_STEP
    fd_step_hessian: float = SECOND_DERIVATIVE_STEP

    def with_steps(self, factor: float, drop_analytic: bool = False) -> 'ScalarField':
        """Copy with finite-difference steps scaled by factor."""
        changes = {'fd_step': self.fd_step * factor, 'fd_step_hessian': self.fd_step_hessian * factor}
        if drop_analytic:
            changes.update(gradient=None, hessian=None)
        return replace(self, **changes)

    def evaluate(self, x) -> float:
        x = _coords(x)
        val = float(self.value(x))
        if not math.isfinite(val):
            raise EvaluationError("Scalar field is not finite", context={'point': x.tolist()})
        return val

    def grad(self, x) -> np.ndarray:
        x = _coords(x)
        if self.gradient is not None:
            g = np.asarray(self.gradient(x), dtype=float)
        else:
            g = self.fd_gradient(x)
        _require_finite(g, 'gradient', x)
        return g

    def hess(self, x) -> np.ndarray:
        x = _coords(x)
        if self.hessian is not None:
            h = np.asarray(self.hessian(x), dtype=float)
        elif self.gradient is not None:
            h = self._fd_hessian_from_gradient(x)
        else:
            h = self._fd_hessian_from_values(x)
        _require_finite(h, 'hessian', x)
        return h

    def fd_gradient(self, x) -> np.ndarray:
        x = _coords(x)
        g = np.zeros(7)
        for k in range(7):
            step = self.fd_step * max(1.0, abs(x[k]))
            e = np.zeros(7)
            e[k] = step
            g[k] = (self.evaluate(x + e) - self.evaluate(x - e)) / (2.0 * step)
        return g

    def _fd_hessian_from_gradient(self, x: np.ndarray) -> np.ndarray:
        h = np.zeros((7, 7))
        for k in range(7):
            step = self.fd_step_hessian * max(1.0, abs(x[k]))
            e = np.zeros(7)
            e[k] = step
            h[k] = (np.asarray(self.gradient(x + e)) - np.asarray(self.gradient(x - e))) / (2.0 * step)
        return 0.5 * (h + h.T)

    def _fd_hessian_from_values(self, x: np.ndarray) -> np.ndarray:
        steps = np.array([self.fd_step_hessian * max(1.0, abs(c)) for c in x])
        center = self.evaluate(x)
        h = np.zeros((7, 7))
        for k in range(7):
            ek = np.zeros(7)
            ek[k] = steps[k]
            h[k, k] = (self.evaluate(x + ek) - 2.0 * center + self.evaluate(x - ek)) / (steps[k] ** 2)
            for m in range(k + 1, 7):
                em = np.zeros(7)
                em[m] = steps[m]
                mixed = (self.evaluate(x + ek + em) - self.evaluate(x + ek - em)
                         - self.evaluate(x - ek + em) + self.evaluate(x - ek - em))
                h[k, m] = h[m, k] = mixed / (4.0 * steps[k] * steps[m])
        return h

    def check_gradient(self, x, rtol: float = 1e-6) -> bool:
        """Compare the analytic gradient against central differences."""
        if self.gradient is None:
            return True
        x = _coords(x)
        analytic = self.grad(x)
        numeric = self.fd_gradient(x)
        scale = max(1.0, float(np.max(np.abs(analytic))))
        ok = float(np.max(np.abs(analytic - numeric))) <= rtol * scale
        if not ok:
            logger.debug("Analytic gradient disagrees with finite differences",
                         extra={'point': x.tolist(), 'tolerance': rtol})
        return ok


def _require_finite(arr: np.ndarray, what: str, x: np.ndarray):
    if not np.all(np.isfinite(arr)):
        raise EvaluationError(f"Non-finite {what}", context={'point': x.tolist()})


def xi_rows(p) -> np.ndarray:
    """The 4 x 7 coordinate rows of xi_1..xi_4 at p."""
    return frame_matrix(p)[:4]


def xi_derivative(u: ScalarField, i: int, p) -> float:
    """xi_i u at p."""
    _check_index(i, 4)
    return float(xi_rows(p)[i - 1] @ u.grad(p))


def horizontal_derivatives(u: ScalarField, p) -> np.ndarray:
    """(xi_1 u, .., xi_4 u) at p."""
    return xi_rows(p) @ u.grad(p)


def xi_second_matrix(u: ScalarField, p) -> np.ndarray:
    """
    Matrix H[i, j] = xi_i(xi_j u) at p.

    Chain rule: xi_i(xi_j u) = sum_a D[j, a, i] d_{t_a} u + (C Hess C^T)[i, j]
    with C the rows of xi_1..xi_4.
    """
    x = _coords(p)
    rows = xi_rows(x)
    g = u.grad(x)
    first_order = np.einsum('jai,a->ij', XI_COEFFS, g[4:])
    return first_order + rows @ u.hess(x) @ rows.T


def xi_second_derivative(u: ScalarField, i: int, j: int, p) -> float:
    """xi_i(xi_j u) at p."""
    _check_index(i, 4)
    _check_index(j, 4)
    return float(xi_second_matrix(u, p)[i - 1, j - 1])


def horizontality_residual(curve: 'SampledCurve') -> float:
    """
    Largest Euclidean norm of theta(velocity) over the samples of a curve.

    Raises:
        InputError: If the curve carries no velocities
    """
    if curve.velocities is None:
        raise InputError("Curve has no velocities", context={'operation': 'horizontality_residual'})
    theta = theta_array(curve.points, curve.velocities)
    if theta.size == 0:
        return 0.0
    return float(np.max(np.linalg.norm(theta, axis=-1)))
