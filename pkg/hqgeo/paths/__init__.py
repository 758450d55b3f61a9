from hqgeo.paths.curve import CurveSegment, SampledCurve
from hqgeo.paths.horizontal import (
    VerticalConnectorPlan,
    connect,
    horizontal_lift,
    length_cc,
    solve_vertical_coeffs,
    vertical_connector,
)

__all__ = [
    'CurveSegment',
    'SampledCurve',
    'VerticalConnectorPlan',
    'connect',
    'horizontal_lift',
    'length_cc',
    'solve_vertical_coeffs',
    'vertical_connector',
]
