"""
Levi-Civita connection and curvature of the Riemannian approximations g_L.

Everything is expressed in the g_L-orthonormal frame
E = (xi_1, xi_2, xi_3, xi_4, T_1', T_2', T_3') with T_a' = T_a / L_a, in which
the structure constants are constant and the connection follows from Koszul's
formula alone.

Curvature sign: R(X, Y)Z = nabla_Y nabla_X Z - nabla_X nabla_Y Z + nabla_[X,Y] Z,
sectional curvature K(U, V) = g_L(R(U, V)U, V).
"""
import itertools
import math
from dataclasses import dataclass, field
from typing import Dict, Sequence

import numpy as np

from hqgeo.group.frame import FrameVector, lie_bracket
from hqgeo.utils.exceptions import ParameterError


ORTHONORMAL_LABELS = ('xi1', 'xi2', 'xi3', 'xi4', "T1'", "T2'", "T3'")

# Horizontal planes and the vertical direction of their bracket.
HORIZONTAL_PLANE_AXIS = {(1, 2): 1, (3, 4): 1, (1, 3): 2, (2, 4): 2, (1, 4): 3, (2, 3): 3}

PUBLISHED_RICCI_XI_FACTOR = -4.0 / 3.0
PUBLISHED_RICCI_T_FACTOR = 2.0
PUBLISHED_SCALAR_FACTOR = -10.0 / 21.0
MATCH_TOLERANCE = 1e-10


@dataclass(frozen=True)
class MetricParams:
    L1: float = 1.0
    L2: float = 1.0
    L3: float = 1.0

    def __post_init__(self):
        for name in ('L1', 'L2', 'L3'):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ParameterError(f"{name} must be positive and finite, got {value}")

    @classmethod
    def symmetric(cls, value: float) -> 'MetricParams':
        return cls(value, value, value)

    @classmethod
    def from_sequence(cls, values: Sequence[float]) -> 'MetricParams':
        values = [float(v) for v in values]
        if len(values) == 1:
            return cls.symmetric(values[0])
        if len(values) != 3:
            raise ParameterError(f"Expected 1 or 3 metric scales, got {len(values)}")
        return cls(*values)

    def as_array(self) -> np.ndarray:
        return np.array([self.L1, self.L2, self.L3])

    @property
    def is_symmetric(self) -> bool:
        return self.L1 == self.L2 == self.L3


def structure_constants(L: MetricParams) -> np.ndarray:
    """c[i, j, k] with [E_i, E_j] = sum_k c[i, j, k] E_k in the orthonormal frame."""
    scales = L.as_array()
    c = np.zeros((7, 7, 7))
    for i in range(7):
        for j in range(7):
            # T_a = L_a T_a'
            c[i, j, 4:] = np.asarray(lie_bracket(i + 1, j + 1).v) * scales
    return c


@dataclass(frozen=True, eq=False)
class ConnectionTable:
    """
    gamma[i, j, k]: component on E_k of nabla_{E_i} E_j.
    """
    L: MetricParams
    gamma: np.ndarray
    brackets: np.ndarray

    def nabla(self, x_vec: Sequence[float], y_vec: Sequence[float]) -> np.ndarray:
        """nabla_X Y for constant frame coefficients."""
        return np.einsum('i,j,ijk->k', np.asarray(x_vec, dtype=float), np.asarray(y_vec, dtype=float), self.gamma)

    def bracket(self, x_vec: Sequence[float], y_vec: Sequence[float]) -> np.ndarray:
        return np.einsum('i,j,ijk->k', np.asarray(x_vec, dtype=float), np.asarray(y_vec, dtype=float), self.brackets)

    def entry(self, i: int, j: int) -> np.ndarray:
        """nabla_{E_i} E_j for indices 1..7."""
        return self.gamma[i - 1, j - 1].copy()


def connection_coeffs(L: MetricParams) -> ConnectionTable:
    """
    Koszul's formula for an orthonormal frame with constant structure constants:

        g(nabla_{E_i} E_j, E_k) = 1/2 (c_ij^k - c_jk^i + c_ki^j)
    """
    c = structure_constants(L)
    gamma = 0.5 * (c - np.einsum('jki->ijk', c) + np.einsum('kij->ijk', c))
    return ConnectionTable(L, gamma, c)


def orthonormal_coefficients(vec: FrameVector, L: MetricParams) -> np.ndarray:
    """Coefficients of a FrameVector on (xi, T') instead of (xi, T)."""
    coeffs = vec.coefficients()
    coeffs[4:] = coeffs[4:] * L.as_array()
    return coeffs


def riemann(L, x_vec, y_vec, z_vec, table: ConnectionTable = None) -> np.ndarray:
    """
    R(X, Y)Z for constant orthonormal-frame coefficient vectors.

    Args:
        L: Metric scales
        x_vec: Coefficients of X on E
        y_vec: Coefficients of Y on E
        z_vec: Coefficients of Z on E
        table: Precomputed connection for L

    Returns:
        Coefficients of R(X, Y)Z on E
    """
    table = table or connection_coeffs(L)
    x_vec = np.asarray(x_vec, dtype=float)
    y_vec = np.asarray(y_vec, dtype=float)
    z_vec = np.asarray(z_vec, dtype=float)
    return (table.nabla(y_vec, table.nabla(x_vec, z_vec))
            - table.nabla(x_vec, table.nabla(y_vec, z_vec))
            + table.nabla(table.bracket(x_vec, y_vec), z_vec))


def sectional(L: MetricParams, i: int, j: int, table: ConnectionTable = None) -> float:
    """K(E_i, E_j) = g_L(R(E_i, E_j)E_i, E_j) for frame indices 1..7."""
    e = np.eye(7)
    return float(riemann(L, e[i - 1], e[j - 1], e[i - 1], table)[j - 1])


def published_sectional(L: MetricParams, i: int, j: int) -> float:
    """Tabulated sectional curvature of the plane (E_i, E_j)."""
    i, j = sorted((i, j))
    scales = L.as_array()
    if j <= 4:
        return -12.0 * scales[HORIZONTAL_PLANE_AXIS[(i, j)] - 1] ** 2
    if i <= 4:
        return 4.0 * scales[j - 5] ** 2
    return 0.0


def plane_label(i: int, j: int) -> str:
    return f"{ORTHONORMAL_LABELS[i - 1]},{ORTHONORMAL_LABELS[j - 1]}"


@dataclass
class CurvatureReport:
    L: MetricParams
    sectional: Dict[str, float] = field(default_factory=dict)
    sectional_published: Dict[str, float] = field(default_factory=dict)
    ricci_trace: Dict[str, float] = field(default_factory=dict)
    ricci_mean: Dict[str, float] = field(default_factory=dict)
    ricci_published: Dict[str, float] = field(default_factory=dict)
    scalar_trace: float = 0.0
    scalar_paper_convention: float = 0.0
    scalar_published: float = 0.0
    paper_match_flags: Dict[str, bool] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            'L': [self.L.L1, self.L.L2, self.L.L3],
            'sectional': self.sectional,
            'sectional_published': self.sectional_published,
            'ricci_trace': self.ricci_trace,
            'ricci_mean': self.ricci_mean,
            'ricci_published': self.ricci_published,
            'scalar_trace': self.scalar_trace,
            'scalar_paper_convention': self.scalar_paper_convention,
            'scalar_published': self.scalar_published,
            'paper_match_flags': self.paper_match_flags,
        }


def _close(a: float, b: float) -> bool:
    return abs(a - b) <= MATCH_TOLERANCE * max(1.0, abs(b))


def curvature_report(L: MetricParams) -> CurvatureReport:
    """
    Sectional, Ricci and scalar curvature side by side with the tabulated values.

    Ricci is given as the trace sum_V K(U, V) and as its mean over the six
    planes through U. Scalar curvature is given as the trace of Ricci and as
    the mean of the seven mean-Ricci values.
    """
    table = connection_coeffs(L)
    report = CurvatureReport(L)
    computed = np.zeros((7, 7))
    for i, j in itertools.combinations(range(1, 8), 2):
        value = sectional(L, i, j, table)
        computed[i - 1, j - 1] = computed[j - 1, i - 1] = value
        report.sectional[plane_label(i, j)] = value
        report.sectional_published[plane_label(i, j)] = published_sectional(L, i, j)

    sum_sq = float(np.sum(L.as_array() ** 2))
    for i in range(7):
        label = ORTHONORMAL_LABELS[i]
        trace = float(np.sum(computed[i]))
        report.ricci_trace[label] = trace
        report.ricci_mean[label] = trace / 6.0
        if i < 4:
            report.ricci_published[label] = PUBLISHED_RICCI_XI_FACTOR * sum_sq
        else:
            report.ricci_published[label] = PUBLISHED_RICCI_T_FACTOR * L.as_array()[i - 4] ** 2

    report.scalar_trace = float(sum(report.ricci_trace.values()))
    report.scalar_paper_convention = float(sum(report.ricci_mean.values())) / 7.0
    report.scalar_published = PUBLISHED_SCALAR_FACTOR * sum_sq

    labels = ORTHONORMAL_LABELS
    report.paper_match_flags = {
        'sectional': all(_close(report.sectional[k], report.sectional_published[k]) for k in report.sectional),
        'ricci_mean_xi': all(_close(report.ricci_mean[k], report.ricci_published[k]) for k in labels[:4]),
        'ricci_mean_T': all(_close(report.ricci_mean[k], report.ricci_published[k]) for k in labels[4:]),
        'ricci_trace_T': all(_close(report.ricci_trace[k], report.ricci_published[k]) for k in labels[4:]),
        'scalar_paper_convention': _close(report.scalar_paper_convention, report.scalar_published),
        'scalar_trace': _close(report.scalar_trace, report.scalar_published),
    }
    return report
