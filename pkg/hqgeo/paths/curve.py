"""Sampled curves in the group, with per-sample velocities and segment boundaries."""
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from hqgeo.algebra.quaternion import conj_array, hamilton
from hqgeo.group.heisenberg import HeisPoint, MetricScale, compose_array
from hqgeo.utils.exceptions import InputError


@dataclass(frozen=True, eq=False)
class CurveSegment:
    """One smooth piece, sampled on its own parameter s in [0, 1]."""
    s: np.ndarray
    points: np.ndarray
    velocities: np.ndarray


@dataclass(frozen=True, eq=False)
class SampledCurve:
    """
    Discretized path lambda -> gamma(lambda) on [0, 1].

    velocities hold d gamma / d lambda in coordinates. boundaries lists the
    sample index at which each smooth segment starts; the segment ends at the
    next boundary (inclusive) or at the last sample.
    """
    lam: np.ndarray
    points: np.ndarray
    velocities: Optional[np.ndarray] = None
    boundaries: Tuple[int, ...] = (0,)

    def __post_init__(self):
        lam = np.asarray(self.lam, dtype=float)
        if lam.ndim != 1 or lam.size < 2:
            raise InputError("A curve needs at least two samples")
        if lam[0] != 0.0 or lam[-1] != 1.0 or np.any(np.diff(lam) <= 0.0):
            raise InputError("Curve parameter must increase strictly from 0 to 1")
        if np.shape(self.points) != (lam.size, 7):
            raise InputError(f"Points must have shape ({lam.size}, 7), got {np.shape(self.points)}")
        if self.velocities is not None and np.shape(self.velocities) != (lam.size, 7):
            raise InputError("Velocities must match the points")

    @classmethod
    def from_segments(cls, segments: Sequence[CurveSegment]) -> 'SampledCurve':
        """Concatenate segments, giving each an equal share of [0, 1]."""
        if not segments:
            raise InputError("No segments to concatenate")
        m = len(segments)
        lam, points, velocities, boundaries = [], [], [], []
        for k, seg in enumerate(segments):
            s = np.asarray(seg.s, dtype=float)
            start = 0 if k == 0 else 1
            boundaries.append(sum(len(chunk) for chunk in lam) - (0 if k == 0 else 1))
            lam.append((k + s[start:]) / m)
            points.append(np.asarray(seg.points, dtype=float)[start:])
            velocities.append(m * np.asarray(seg.velocities, dtype=float)[start:])
        lam_all = np.concatenate(lam)
        lam_all[0] = 0.0
        lam_all[-1] = 1.0
        return cls(lam_all, np.concatenate(points), np.concatenate(velocities), tuple(boundaries))

    @classmethod
    def from_function(
        cls,
        position: Callable[[np.ndarray], np.ndarray],
        velocity: Optional[Callable[[np.ndarray], np.ndarray]] = None,
        samples: int = 257
    ) -> 'SampledCurve':
        lam = np.linspace(0.0, 1.0, samples)
        return cls(lam, position(lam), None if velocity is None else velocity(lam))

    @classmethod
    def constant(cls, point: HeisPoint) -> 'SampledCurve':
        """Degenerate curve staying at one point."""
        pts = np.tile(point.as_array(), (2, 1))
        return cls(np.array([0.0, 1.0]), pts, np.zeros((2, 7)))

    @property
    def start(self) -> HeisPoint:
        return HeisPoint.from_array(self.points[0])

    @property
    def end(self) -> HeisPoint:
        return HeisPoint.from_array(self.points[-1])

    def segment_slices(self):
        edges = list(self.boundaries) + [len(self.lam) - 1]
        return [slice(a, b + 1) for a, b in zip(edges[:-1], edges[1:])]

    def translate(self, g: HeisPoint) -> 'SampledCurve':
        """Left translation by g, with velocities pushed forward."""
        g_arr = g.as_array()
        points = compose_array(g_arr, self.points)
        velocities = None
        if self.velocities is not None:
            vq = self.velocities[:, :4]
            prod = hamilton(g_arr[:4], conj_array(vq))
            velocities = np.concatenate([vq, self.velocities[:, 4:] + 2.0 * prod[:, 1:]], axis=-1)
        return SampledCurve(self.lam, points, velocities, self.boundaries)

    def dilate(self, scale) -> 'SampledCurve':
        if not isinstance(scale, MetricScale):
            scale = MetricScale(float(scale))
        factors = np.array([scale.delta] * 4 + [scale.delta ** 2] * 3)
        velocities = None if self.velocities is None else self.velocities * factors
        return SampledCurve(self.lam, self.points * factors, velocities, self.boundaries)
