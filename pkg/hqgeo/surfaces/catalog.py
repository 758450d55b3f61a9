"""
Named example surfaces, addressable from the command line.

Each entry builds the surface for its parameters and places a canonical
surface point at horizontal radius r.
"""
import math
from dataclasses import dataclass
from typing import Callable, Dict, Mapping, Optional, Tuple

import numpy as np

from hqgeo.group.frame import ScalarField
from hqgeo.group.heisenberg import HeisPoint
from hqgeo.surfaces.hmc import (
    ImplicitSurface,
    RadialProfile,
    cc_sphere_radial_profile,
    profile_point,
    radial_surface,
)
from hqgeo.utils.exceptions import DomainError, ParameterError


PARABOLOID_COEFFICIENT = math.sqrt(4.0 / 3.0)


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    surface: ImplicitSurface
    point: Callable[[float], HeisPoint]
    radius_range: Tuple[float, float]
    profile: Optional[RadialProfile] = None
    published: Optional[Callable[[float], float]] = None

    def check_radius(self, r: float):
        lo, hi = self.radius_range
        if not lo < r < hi:
            raise DomainError(f"{self.name} needs {lo:g} < r < {hi:g}, got r = {r:g}",
                              context={'operation': 'catalog', 'params': {'surface': self.name, 'r': r}})


def _radius_param(params: Mapping[str, float]) -> float:
    radius = float(params.get('R', 1.0))
    if not (math.isfinite(radius) and radius > 0.0):
        raise ParameterError(f"R must be positive, got {radius}")
    return radius


def hyperplane_x1(params: Mapping[str, float]) -> CatalogEntry:
    """u = x_1; the surface point at r is x_2 = r."""
    def gradient(x: np.ndarray) -> np.ndarray:
        g = np.zeros(7)
        g[0] = 1.0
        return g

    field = ScalarField(lambda x: float(x[0]), gradient, lambda x: np.zeros((7, 7)))

    def point(r: float) -> HeisPoint:
        return HeisPoint.from_array([0.0, r, 0.0, 0.0, 0.0, 0.0, 0.0])

    return CatalogEntry('hyperplane-x1', ImplicitSurface(field, name='hyperplane-x1'), point,
                        (-math.inf, math.inf), published=lambda r: 0.0)


def paraboloid_sqrt43(params: Mapping[str, float]) -> CatalogEntry:
    c = PARABOLOID_COEFFICIENT
    profile = RadialProfile(lambda r: c * r * r, lambda r: 2.0 * c * r, lambda r: 2.0 * c, name='paraboloid-sqrt43')
    return CatalogEntry('paraboloid-sqrt43', radial_surface(profile), lambda r: profile_point(profile, r),
                        (0.0, math.inf), profile, published=lambda r: 0.0)


def published_euclidean_sphere_hmc(radius: float, r: float) -> float:
    """Printed closed form for the Euclidean sphere, in terms of r and tau = f(r)."""
    tau_sq = radius * radius - r * r
    return (3.0 * (4.0 + radius * radius) + 8.0 * r * r * (4.0 * tau_sq + 3.0)) / (8.0 * r * (tau_sq + 1.0) ** 1.5)


def euclidean_sphere(params: Mapping[str, float]) -> CatalogEntry:
    """|q|^2 + |t|^2 = R^2 with profile f = sqrt(R^2 - r^2)."""
    radius = _radius_param(params)
    r2 = radius * radius

    def f(r):
        return math.sqrt(r2 - r * r)

    profile = RadialProfile(f, lambda r: -r / f(r), lambda r: -r2 / f(r) ** 3,
                            name=f'euclidean-sphere(R={radius:g})')
    field = ScalarField(lambda x: float(x @ x) - r2, lambda x: 2.0 * x, lambda x: 2.0 * np.eye(7))
    surface = ImplicitSurface(field, name=profile.name)
    return CatalogEntry('euclidean-sphere', surface, lambda r: profile_point(profile, r), (0.0, radius), profile,
                        published=lambda r: published_euclidean_sphere_hmc(radius, r))


def koranyi_sphere_field(radius: float) -> ScalarField:
    """u = |q|^4 + |t|^2 - R^4 with analytic derivatives."""
    r4 = radius ** 4

    def value(x: np.ndarray) -> float:
        q2 = float(x[:4] @ x[:4])
        return q2 * q2 + float(x[4:] @ x[4:]) - r4

    def gradient(x: np.ndarray) -> np.ndarray:
        q2 = float(x[:4] @ x[:4])
        return np.concatenate([4.0 * q2 * x[:4], 2.0 * x[4:]])

    def hessian(x: np.ndarray) -> np.ndarray:
        q = x[:4]
        h = np.zeros((7, 7))
        h[:4, :4] = 4.0 * float(q @ q) * np.eye(4) + 8.0 * np.outer(q, q)
        h[4:, 4:] = 2.0 * np.eye(3)
        return h

    return ScalarField(value, gradient, hessian)


def koranyi_sphere(params: Mapping[str, float]) -> CatalogEntry:
    radius = _radius_param(params)
    r4 = radius ** 4

    def f(r):
        return math.sqrt(r4 - r ** 4)

    def fsecond(r):
        value = f(r)
        return -6.0 * r * r / value - 4.0 * r ** 6 / value ** 3

    profile = RadialProfile(f, lambda r: -2.0 * r ** 3 / f(r), fsecond, name=f'koranyi-sphere(R={radius:g})')
    surface = ImplicitSurface(koranyi_sphere_field(radius), name=profile.name)
    return CatalogEntry('koranyi-sphere', surface, lambda r: profile_point(profile, r), (0.0, radius), profile,
                        published=lambda r: 9.0 * r / (radius * radius))


def cc_sphere(params: Mapping[str, float], as_published: bool = False) -> CatalogEntry:
    radius = _radius_param(params)
    profile = cc_sphere_radial_profile(radius, as_published)
    return CatalogEntry('cc-sphere', radial_surface(profile), lambda r: profile_point(profile, r),
                        (0.0, radius), profile)


SURFACES: Dict[str, Callable[..., CatalogEntry]] = {
    'hyperplane-x1': hyperplane_x1,
    'paraboloid-sqrt43': paraboloid_sqrt43,
    'euclidean-sphere': euclidean_sphere,
    'koranyi-sphere': koranyi_sphere,
    'cc-sphere': cc_sphere,
}


def build_surface(name: str, params: Optional[Mapping[str, float]] = None, as_published: bool = False) -> CatalogEntry:
    """
    Look up a catalog surface.

    Raises:
        ParameterError: Unknown name
    """
    try:
        builder = SURFACES[name]
    except KeyError as e:
        raise ParameterError(f"Unknown surface '{name}', choose from {', '.join(SURFACES)}", original_exception=e)
    params = params or {}
    if name == 'cc-sphere':
        return builder(params, as_published)
    return builder(params)
