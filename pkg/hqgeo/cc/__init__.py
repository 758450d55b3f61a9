from hqgeo.cc.metric import (
    CCGeodesic,
    cc_distance,
    cc_distance_origin,
    cc_geodesic_eval,
    cc_geodesic_through,
    cc_sphere_sample,
    comparison_ratio,
    x0_solve,
)

__all__ = [
    'CCGeodesic',
    'cc_distance',
    'cc_distance_origin',
    'cc_geodesic_eval',
    'cc_geodesic_through',
    'cc_sphere_sample',
    'comparison_ratio',
    'x0_solve',
]
