from hqgeo.algebra.quaternion import (
    Quaternion,
    PureQuaternion,
    multiply,
    inverse,
    exp_pure,
    conj,
)

__all__ = ['Quaternion', 'PureQuaternion', 'multiply', 'inverse', 'exp_pure', 'conj']
