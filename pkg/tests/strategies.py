"""Hypothesis strategies for group elements."""
from hypothesis import strategies as st

from hqgeo.algebra.quaternion import PureQuaternion, Quaternion
from hqgeo.group.heisenberg import HeisPoint


coordinate = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False, allow_infinity=False)
quaternions = st.builds(Quaternion, coordinate, coordinate, coordinate, coordinate)
pure_quaternions = st.builds(PureQuaternion, coordinate, coordinate, coordinate)
points = st.builds(HeisPoint, quaternions, pure_quaternions)
