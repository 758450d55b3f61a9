from hqgeo.group.heisenberg import (
    AutomorphismKind,
    HeisPoint,
    MetricScale,
    automorphism,
    compose,
    invert,
    koranyi_distance,
    koranyi_gauge,
)

__all__ = [
    'AutomorphismKind',
    'HeisPoint',
    'MetricScale',
    'automorphism',
    'compose',
    'invert',
    'koranyi_distance',
    'koranyi_gauge',
]
