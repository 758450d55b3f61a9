from typing import Any, Dict, Optional


class GeometryError(Exception):
    """
    Base class for every failure raised by the geometry kernel.
    The CLI maps any GeometryError to exit code 1.
    """
    def __init__(
        self,
        message: str,
        original_exception: Exception = None,
        context: Optional[Dict[str, Any]] = None
    ):
        super().__init__(message)
        self.original_exception = original_exception
        self.context = context or {}


class DomainError(GeometryError):
    """
    Input lies outside the set where the operation is defined.
    Used for zero quaternions, inversion at the origin, characteristic points
    and radii outside a profile's range.
    """


class OutOfRangeError(DomainError):
    """
    Target cannot be reached on the first geodesic arc.
    """


class DegenerateInputError(DomainError):
    """
    Input collapses the problem, e.g. a boundary-value target at the origin.
    """


class ParameterError(GeometryError):
    """
    A map parameter is invalid: non-unit rotations, non-positive dilations or
    metric scales, non-unit geodesic directions.
    """


class InputError(GeometryError):
    """
    Structural problem with caller data, such as a curve without velocities or
    a lift whose start does not sit over the planar curve.
    """


class EvaluationError(GeometryError):
    """
    A field or derivative evaluated to a non-finite value.
    """


class SolverError(GeometryError):
    """
    A root that must exist was not bracketed or did not converge.
    """
