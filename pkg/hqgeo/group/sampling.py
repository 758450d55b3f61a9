"""Deterministic and seeded point sources shared by sphere sampling and the verify suites."""
from typing import Tuple

import numpy as np
from scipy.stats import qmc

from hqgeo.group.heisenberg import HeisPoint


def halton_unit(n: int, d: int = 6) -> np.ndarray:
    """First n points of the unscrambled Halton sequence in [0, 1)^d."""
    return qmc.Halton(d=d, scramble=False).random(n)


def s2_from_unit(u1: np.ndarray, u2: np.ndarray) -> np.ndarray:
    """Area-preserving map from [0, 1)^2 to the unit sphere S^2."""
    z = 1.0 - 2.0 * u1
    rho = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    phi = 2.0 * np.pi * u2
    return np.stack([rho * np.cos(phi), rho * np.sin(phi), z], axis=-1)


def s3_from_unit(u1: np.ndarray, u2: np.ndarray, u3: np.ndarray) -> np.ndarray:
    """Shoemake's uniform unit-quaternion map from [0, 1)^3 to S^3."""
    a = np.sqrt(1.0 - u1)
    b = np.sqrt(u1)
    return np.stack([
        a * np.sin(2.0 * np.pi * u2),
        a * np.cos(2.0 * np.pi * u2),
        b * np.sin(2.0 * np.pi * u3),
        b * np.cos(2.0 * np.pi * u3),
    ], axis=-1)


def sphere_parameters(n: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Quasi-uniform (fraction, S^2 direction, S^3 direction) triples.

    Returns:
        Tuple of arrays with shapes (n,), (n, 3) and (n, 4)
    """
    u = halton_unit(n, 6)
    return u[:, 0], s2_from_unit(u[:, 1], u[:, 2]), s3_from_unit(u[:, 3], u[:, 4], u[:, 5])


def random_unit_quaternion(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=4)
    return v / np.linalg.norm(v)


def random_point(rng: np.random.Generator, scale: float = 1.0) -> HeisPoint:
    return HeisPoint.from_array(rng.uniform(-scale, scale, size=7))


def koranyi_sphere_points(radius: float, n: int) -> np.ndarray:
    """
    (n, 7) points with |q|^4 + |t|^2 = radius^4.

    The split between |q|^2 = R^2 cos(psi) and |t| = R^2 sin(psi) uses
    psi = pi u0 / 2 from the same Halton triples as the CC sphere.
    """
    u0, dirs3, dirs4 = sphere_parameters(n)
    psi = 0.5 * np.pi * u0
    r2 = radius * radius
    q = np.sqrt(r2 * np.cos(psi))[:, None] * dirs4
    t = (r2 * np.sin(psi))[:, None] * dirs3
    return np.concatenate([q, t], axis=-1)
