from hqgeo.riemann.connection import (
    ConnectionTable,
    CurvatureReport,
    MetricParams,
    connection_coeffs,
    curvature_report,
    riemann,
    sectional,
)
from hqgeo.riemann.geodesics import (
    GLGeodesic,
    gl_geodesic_eval,
    gl_length,
    solve_gl_bvp,
)

__all__ = [
    'ConnectionTable',
    'CurvatureReport',
    'GLGeodesic',
    'MetricParams',
    'connection_coeffs',
    'curvature_report',
    'gl_geodesic_eval',
    'gl_length',
    'riemann',
    'sectional',
    'solve_gl_bvp',
]
