from hqgeo.surfaces.catalog import SURFACES, CatalogEntry, build_surface
from hqgeo.surfaces.hmc import (
    ImplicitSurface,
    RadialProfile,
    cc_sphere_profile,
    hmc,
    hmc_profile,
    horizontal_gradient,
    horizontal_normal,
    is_characteristic,
    minimality_residual,
)

__all__ = [
    'SURFACES',
    'CatalogEntry',
    'ImplicitSurface',
    'RadialProfile',
    'build_surface',
    'cc_sphere_profile',
    'hmc',
    'hmc_profile',
    'horizontal_gradient',
    'horizontal_normal',
    'is_characteristic',
    'minimality_residual',
]
