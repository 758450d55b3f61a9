"""
Invariant suites behind the verify subcommand.

Each check draws its inputs from a seeded generator, measures the worst
residual and compares it with a tolerance. Measurements that are reported
rather than asserted always pass and carry their value in the message.
"""
import logging
import math
import sys
import time
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from hqgeo.algebra.quaternion import PureQuaternion, Quaternion, exp_pure, f_ratio, multiply, vers
from hqgeo.cc.metric import (
    cc_distance,
    cc_distance_origin,
    cc_geodesic_through,
    cc_horizontality_residual,
    cc_sphere_points,
    comparison_ratio,
    comparison_ratio_sweep,
    gl_cc_deviation,
    vertical_gain_oracle,
    x0_solve,
)
from hqgeo.group.frame import (
    J_MATRICES,
    bracket_by_differentiation,
    coframe_matrix,
    dtheta,
    frame_matrix,
    horizontality_residual,
    lie_bracket,
)
from hqgeo.group.heisenberg import (
    HeisPoint,
    compose,
    dilate,
    inversion,
    inversion_distortion,
    invert,
    koranyi_distance,
    koranyi_gauge,
    rotate,
    sp1_act,
)
from hqgeo.group.sampling import random_point, random_unit_quaternion
from hqgeo.paths.horizontal import (
    VerticalConnectorPlan,
    bilinear_relations,
    connect,
    length_cc,
    solve_vertical_coeffs,
)
from hqgeo.riemann.connection import (
    MetricParams,
    connection_coeffs,
    curvature_report,
    published_sectional,
    sectional,
)
from hqgeo.riemann.geodesics import (
    GLGeodesic,
    betadot_residual,
    ddgam_residual,
    dgam_residual,
    gl_geodesic_points,
    gl_length,
    gl_length_quadrature,
    solve_gl_bvp,
    theta_constancy_residual,
)
from hqgeo.surfaces.catalog import build_surface
from hqgeo.surfaces.hmc import (
    RadialProfile,
    cc_profile_step_halving,
    cc_sphere_profile,
    g_matrix,
    hmc,
    hmc_profile,
    horizontal_gradient,
    horizontal_normal,
    is_characteristic,
    profile_point,
    radial_surface,
    riemannian_normal,
)
from hqgeo.utils.exceptions import DomainError, GeometryError, ParameterError, SolverError
from hqgeo.utils.logger import log_error_with_context
from hqgeo.verify.report import TEST_CIRCLE, left_invariance_defect


logger = logging.getLogger(__name__)

SUITE_NAMES = ('algebra', 'geodesics', 'curvature', 'hmc')
LADDER = (1.0, 2.0, 4.0, 8.0, 16.0)
LADDER_TARGET = HeisPoint.from_array([0.6, 0.2, -0.3, 0.1, 0.4, -0.2, 0.3])


@dataclass
class VerifyCounts:
    """Trial counts per check family."""
    random_points: int = 200
    curvature_metrics: int = 100
    geodesics: int = 100
    bvp_cases: int = 500
    sphere_samples: int = 1000
    ratio_sweep: int = 10000
    connect_pairs: int = 1000
    triangle_triples: int = 10000
    hmc_points: int = 100

    @classmethod
    def quick(cls) -> 'VerifyCounts':
        return cls(20, 10, 10, 20, 50, 500, 20, 200, 10)


@dataclass
class CheckResult:
    suite: str
    name: str
    passed: bool
    value: float
    tolerance: float
    message: str = ''
    elapsed_time: float = 0.0

    def to_row(self) -> dict:
        return {
            'suite': self.suite,
            'check': self.name,
            'passed': self.passed,
            'value': self.value,
            'tolerance': self.tolerance,
            'message': self.message,
        }


Check = Callable[[np.random.Generator, VerifyCounts], Tuple[float, float, str]]


def _at_most(value: float, tolerance: float, message: str = '') -> Tuple[float, float, str]:
    return float(value), float(tolerance), message


def _random_quaternion(rng: np.random.Generator) -> Quaternion:
    return Quaternion.from_array(rng.uniform(-1.0, 1.0, 4))


def _random_pure(rng: np.random.Generator, scale: float = 1.0) -> PureQuaternion:
    return PureQuaternion.from_array(rng.uniform(-scale, scale, 3))


def _rel(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return float(np.max(np.abs(a - b)) / max(1.0, float(np.max(np.abs(b)))))


# algebra

def check_quaternion_norm(rng, counts):
    worst = 0.0
    for _ in range(counts.random_points):
        p, q = _random_quaternion(rng), _random_quaternion(rng)
        worst = max(worst, abs(multiply(p, q).norm() - p.norm() * q.norm()) / max(1.0, p.norm() * q.norm()))
    return _at_most(worst, 1e-12)


def check_quaternion_associativity(rng, counts):
    worst = 0.0
    for _ in range(counts.random_points):
        p, q, r = _random_quaternion(rng), _random_quaternion(rng), _random_quaternion(rng)
        worst = max(worst, _rel(((p * q) * r).as_array(), (p * (q * r)).as_array()))
        worst = max(worst, _rel((p * q).conj().as_array(), (q.conj() * p.conj()).as_array()))
    return _at_most(worst, 1e-12)


def check_exp_pure(rng, counts):
    worst = 0.0
    for _ in range(counts.random_points):
        v = _random_pure(rng, 3.0)
        u = v * (1.0 / v.norm())
        a, b = rng.uniform(-2.0, 2.0, 2)
        worst = max(worst, abs(exp_pure(v).norm() - 1.0))
        worst = max(worst, _rel((exp_pure(v) * exp_pure(-v)).as_array(), [1.0, 0.0, 0.0, 0.0]))
        worst = max(worst, _rel(exp_pure(u * (a + b)).as_array(), (exp_pure(u * a) * exp_pure(u * b)).as_array()))
    return _at_most(worst, 1e-12)


def check_group_axioms(rng, counts):
    worst = 0.0
    for _ in range(counts.random_points):
        a, b, c = random_point(rng), random_point(rng), random_point(rng)
        worst = max(worst, _rel(compose(compose(a, b), c).as_array(), compose(a, compose(b, c)).as_array()))
        worst = max(worst, float(np.max(np.abs(compose(invert(a), a).as_array()))))
    return _at_most(worst, 1e-12)


def check_koranyi_distance(rng, counts):
    worst = 0.0
    for _ in range(counts.random_points):
        a, b, c = random_point(rng), random_point(rng), random_point(rng)
        base = koranyi_distance(a, b)
        worst = max(worst, abs(koranyi_distance(compose(c, a), compose(c, b)) - base))
        worst = max(worst, abs(koranyi_distance(b, a) - base))
        delta = float(rng.uniform(0.2, 3.0))
        worst = max(worst, abs(koranyi_distance(dilate(delta, a), dilate(delta, b)) - delta * base))
    return _at_most(worst, 1e-10)


def check_automorphisms(rng, counts):
    worst = 0.0
    for _ in range(counts.random_points):
        p, a, b = random_point(rng), random_point(rng), random_point(rng)
        u = Quaternion.from_array(random_unit_quaternion(rng))
        sigma = Quaternion.from_array(random_unit_quaternion(rng))
        gauge = koranyi_gauge(p)
        worst = max(worst, abs(koranyi_gauge(rotate(u, p)) - gauge))
        worst = max(worst, abs(koranyi_gauge(sp1_act(sigma, p)) - gauge))
        worst = max(worst, _rel(rotate(u, compose(a, b)).as_array(),
                                compose(rotate(u, a), rotate(u, b)).as_array()))
        worst = max(worst, _rel(sp1_act(sigma, compose(a, b)).as_array(),
                                compose(sp1_act(sigma, a), sp1_act(sigma, b)).as_array()))
    return _at_most(worst, 1e-10)


def check_inversion(rng, counts):
    worst = 0.0
    for _ in range(counts.random_points):
        p = random_point(rng)
        worst = max(worst, _rel(inversion(inversion(p)).as_array(), p.as_array()))
        worst = max(worst, abs(koranyi_gauge(inversion(p)) * koranyi_gauge(p) - 1.0))
    return _at_most(worst, 1e-10)


def check_inversion_distortion(rng, counts):
    values = [inversion_distortion(random_point(rng), random_point(rng)) for _ in range(counts.random_points)]
    lo, hi = min(values), max(values)
    return 0.0, 0.0, f"measured d_K(Ia, Ib) |a| |b| / d_K(a, b) in [{lo:.6f}, {hi:.6f}]"


def check_frame_duality(rng, counts):
    worst = 0.0
    for _ in range(counts.random_points):
        p = random_point(rng, 3.0)
        worst = max(worst, float(np.max(np.abs(coframe_matrix(p) @ frame_matrix(p).T - np.eye(7)))))
    return _at_most(worst, 1e-14)


def check_bracket_table(rng, counts):
    worst = 0.0
    for _ in range(min(counts.random_points, 20)):
        p = random_point(rng)
        for i in range(1, 8):
            for j in range(1, 8):
                direct = lie_bracket(i, j).to_coordinates()
                numeric = bracket_by_differentiation(i, j, p)
                worst = max(worst, float(np.max(np.abs(direct - numeric))))
    return _at_most(worst, 1e-12)


def check_dtheta(rng, counts):
    worst = 0.0
    for _ in range(min(counts.random_points, 50)):
        p = random_point(rng)
        x, y = rng.normal(size=4), rng.normal(size=4)
        x_coords = x @ frame_matrix(p)[:4]
        y_coords = y @ frame_matrix(p)[:4]
        for a in range(1, 4):
            lhs = dtheta(a, p, x_coords, y_coords)
            rhs = 2.0 * float((J_MATRICES[a - 1] @ x) @ y)
            worst = max(worst, abs(lhs - rhs))
    return _at_most(worst, 1e-10)


def check_left_invariance(rng, counts):
    worst = 0.0
    for _ in range(min(counts.random_points, 50)):
        worst = max(worst, left_invariance_defect(random_point(rng)))
    return _at_most(worst, 1e-8)


# geodesics

def check_vertical_coeffs(rng, counts):
    worst = 0.0
    for _ in range(counts.connect_pairs):
        t = _random_pure(rng, 5.0)
        k = solve_vertical_coeffs(t)
        scale = max(1.0, t.norm())
        worst = max(worst, float(np.max(np.abs(bilinear_relations(k) + t.as_array() / 4.0))) / scale)
        target = VerticalConnectorPlan.from_coeffs(k).target.as_array()
        worst = max(worst, float(np.max(np.abs(target - np.concatenate([np.zeros(4), t.as_array()])))) / scale)
    return _at_most(worst, 1e-10)


def check_connect(rng, counts):
    worst = 0.0
    shortfall = 0.0
    for _ in range(counts.connect_pairs):
        a, b = random_point(rng), random_point(rng)
        curve = connect(a, b)
        worst = max(worst, float(np.max(np.abs(curve.end.as_array() - b.as_array()))))
        worst = max(worst, horizontality_residual(curve))
        shortfall = max(shortfall, cc_distance(a, b) - length_cc(curve))
    return _at_most(max(worst, shortfall), 1e-8, f"worst d_cc - length_cc = {shortfall:.3e}")


def _random_geodesic(rng: np.random.Generator, metric: MetricParams, max_angle: float) -> GLGeodesic:
    direction = rng.normal(size=3)
    direction /= np.linalg.norm(direction)
    cl = PureQuaternion.from_array(direction * rng.uniform(0.05, max_angle))
    return GLGeodesic(cl, _random_quaternion(rng), metric)


def _random_metric(rng: np.random.Generator) -> MetricParams:
    return MetricParams(*rng.uniform(0.3, 3.0, 3))


def check_gl_first_integrals(rng, counts):
    theta = second = first = vertical = 0.0
    for index in range(counts.geodesics):
        g = _random_geodesic(rng, _random_metric(rng), 2.0 * math.pi)
        theta = max(theta, theta_constancy_residual(g))
        second = max(second, ddgam_residual(g) / max(1.0, g.C.norm() * g.angle ** 2))
        first = max(first, dgam_residual(g))
        # quadrature is slow; a handful of curves is enough
        if index < 10:
            vertical = max(vertical, betadot_residual(g) / max(1.0, gl_length(g) ** 2))
    ok = theta <= 1e-9 and second <= 1e-6 and first <= 1e-9 and vertical <= 1e-10
    return (0.0 if ok else max(theta, second, first, vertical)), 1e-9, \
        f"theta {theta:.2e}, second order {second:.2e}, first integral {first:.2e}, vertical {vertical:.2e}"


def check_gl_length(rng, counts):
    worst = 0.0
    for _ in range(counts.geodesics):
        g = _random_geodesic(rng, _random_metric(rng), 2.0 * math.pi)
        worst = max(worst, abs(gl_length_quadrature(g) - gl_length(g)))
    return _at_most(worst, 1e-8)


def check_vertical_coefficient_oracle(rng, counts):
    circle = TEST_CIRCLE
    integrated, corrected = vertical_gain_oracle(circle)
    _, published = vertical_gain_oracle(circle, as_published=True)
    residual = float(np.max(np.abs(integrated - corrected)))
    factor = float(published[0] / integrated[0])
    ok = residual <= 1e-10 and abs(factor - 2.0) <= 1e-9 and cc_horizontality_residual(circle) <= 1e-10
    return (residual if ok else max(residual, abs(factor - 2.0))), 1e-10, \
        f"published / integrated vertical gain = {factor:.12f}"


def check_bvp_round_trip(rng, counts):
    worst = 0.0
    for _ in range(counts.bvp_cases):
        metric = MetricParams.symmetric(float(rng.uniform(0.5, 2.0)))
        g = _random_geodesic(rng, metric, 2.0 * math.pi - 0.1)
        end = HeisPoint.from_array(gl_geodesic_points(g, [1.0])[0])
        solved = solve_gl_bvp(end, metric)
        worst = max(worst, _rel(solved.CL.as_array(), g.CL.as_array()), _rel(solved.C.as_array(), g.C.as_array()))
    return _at_most(worst, 1e-7)


def check_sphere_round_trip(rng, counts):
    worst = 0.0
    for radius in (0.1, 1.0, 10.0):
        for row in cc_sphere_points(radius, counts.sphere_samples):
            worst = max(worst, abs(cc_distance_origin(HeisPoint.from_array(row)) - radius) / radius)
    return _at_most(worst, 1e-7)


def check_cc_special_values(rng, counts):
    worst = 0.0
    for _ in range(counts.random_points):
        q = _random_quaternion(rng)
        t = _random_pure(rng, 4.0)
        worst = max(worst, abs(cc_distance_origin(HeisPoint(q, PureQuaternion())) - q.norm()))
        worst = max(worst, abs(cc_distance_origin(HeisPoint(Quaternion(), t)) - math.sqrt(math.pi * t.norm())))
    return _at_most(worst, 1e-9)


def check_comparison_ratio(rng, counts):
    lo, hi = comparison_ratio_sweep(counts.ratio_sweep)
    below = max(0.0, 1.0 - lo)
    above = max(0.0, hi - math.sqrt(math.pi))
    for _ in range(counts.random_points):
        p = random_point(rng)
        value = comparison_ratio(p)
        below = max(below, 1.0 - value)
        above = max(above, value - math.sqrt(math.pi))
        ends = max(abs(comparison_ratio(HeisPoint(p.q, PureQuaternion())) - 1.0),
                   abs(comparison_ratio(HeisPoint(Quaternion(), p.t)) - math.sqrt(math.pi)))
        below = max(below, ends)
    return _at_most(max(below, above), 1e-9, f"sweep range [{lo:.9f}, {hi:.9f}]")


def check_cc_metric_axioms(rng, counts):
    worst = 0.0
    for _ in range(counts.triangle_triples):
        a, b, c = random_point(rng), random_point(rng), random_point(rng)
        ab, bc, ac = cc_distance(a, b), cc_distance(b, c), cc_distance(a, c)
        worst = max(worst, ac - ab - bc, koranyi_distance(a, b) - ab, abs(ab - cc_distance(b, a)))
    return _at_most(max(worst, 0.0), 1e-9)


def check_x0_residual(rng, counts):
    worst = 0.0
    for ratio in np.logspace(-4.0, 4.0, 200):
        x0 = x0_solve(ratio)
        value = vers(x0) / (x0 * f_ratio(x0))
        worst = max(worst, abs(value - ratio) / ratio)
    return _at_most(worst, 1e-10)


def check_geodesic_through(rng, counts):
    worst = 0.0
    for _ in range(counts.random_points):
        p = random_point(rng)
        geodesic, radius = cc_geodesic_through(p)
        worst = max(worst, _rel(geodesic.eval(radius).as_array(), p.as_array()))
        worst = max(worst, cc_horizontality_residual(geodesic, radius, 65))
    return _at_most(worst, 1e-8)


def check_l_ladder(rng, counts):
    deviations = [gl_cc_deviation(LADDER_TARGET, scale) for scale in LADDER]
    monotone = all(b < a for a, b in zip(deviations, deviations[1:]))
    message = ', '.join(f"L={scale:g}: {d:.3e}" for scale, d in zip(LADDER, deviations))
    return (0.0 if monotone else 1.0), 0.0, message


# curvature

def check_sectional_table(rng, counts):
    worst = 0.0
    for _ in range(counts.curvature_metrics):
        metric = _random_metric(rng)
        table = connection_coeffs(metric)
        for i in range(1, 8):
            for j in range(i + 1, 8):
                expected = published_sectional(metric, i, j)
                worst = max(worst, abs(sectional(metric, i, j, table) - expected) / max(1.0, abs(expected)))
    return _at_most(worst, 1e-10)


def check_connection_properties(rng, counts):
    worst = 0.0
    for _ in range(min(counts.curvature_metrics, 20)):
        table = connection_coeffs(_random_metric(rng))
        torsion = table.gamma - np.transpose(table.gamma, (1, 0, 2)) - table.brackets
        compat = table.gamma + np.transpose(table.gamma, (0, 2, 1))
        worst = max(worst, float(np.max(np.abs(torsion))), float(np.max(np.abs(compat))))
    return _at_most(worst, 1e-12)


def check_ricci_flags(rng, counts):
    report = curvature_report(_random_metric(rng))
    flags = report.paper_match_flags
    ok = flags['sectional'] and flags['ricci_mean_xi'] and not flags['ricci_mean_T'] and not flags['ricci_trace_T']
    return (0.0 if ok else 1.0), 0.0, \
        f"mean Ricci on xi matches, Ricci on T flagged: {not flags['ricci_trace_T']}"


# hmc

def _random_profile(rng: np.random.Generator) -> RadialProfile:
    a, b, c = rng.uniform(0.2, 2.0, 3)
    return RadialProfile(
        lambda r: a + b * r * r + c * r ** 4,
        lambda r: 2.0 * b * r + 4.0 * c * r ** 3,
        lambda r: 2.0 * b + 12.0 * c * r * r,
        name='random-quartic'
    )


def _rotated_profile_point(rng: np.random.Generator, fp: RadialProfile, r: float) -> HeisPoint:
    q = random_unit_quaternion(rng) * r
    t = rng.normal(size=3)
    t *= fp.value(r) / np.linalg.norm(t)
    return HeisPoint.from_array(np.concatenate([q, t]))


def check_minimal_examples(rng, counts):
    worst = 0.0
    plane = build_surface('hyperplane-x1')
    paraboloid = build_surface('paraboloid-sqrt43')
    for _ in range(counts.hmc_points):
        coords = rng.uniform(-2.0, 2.0, 7)
        coords[0] = 0.0
        worst = max(worst, abs(hmc(plane.surface, HeisPoint.from_array(coords))))
        r = float(rng.uniform(0.1, 2.0))
        worst = max(worst, abs(hmc(paraboloid.surface, _rotated_profile_point(rng, paraboloid.profile, r))))
    return _at_most(worst, 1e-7)


def check_koranyi_sphere(rng, counts):
    worst = 0.0
    for radius in (0.5, 1.0, 2.0):
        entry = build_surface('koranyi-sphere', {'R': radius})
        for r in np.linspace(0.05, 0.95, 10) * radius:
            worst = max(worst, abs(hmc(entry.surface, entry.point(r)) - 9.0 * r / radius ** 2))
    return _at_most(worst, 1e-6)


def check_profile_formula(rng, counts):
    worst = 0.0
    for _ in range(counts.hmc_points):
        fp = _random_profile(rng)
        r = float(rng.uniform(0.1, 2.0))
        surface = radial_surface(fp)
        reference = hmc_profile(fp, r)
        worst = max(worst, abs(hmc(surface, _rotated_profile_point(rng, fp, r)) - reference))
        worst = max(worst, abs(hmc(surface, profile_point(fp, r)) - reference))
    return _at_most(worst, 1e-6)


def check_g_matrix(rng, counts):
    worst = 0.0
    for _ in range(counts.hmc_points):
        fp = _random_profile(rng)
        p = random_point(rng)
        surface = radial_surface(fp)
        worst = max(worst, _rel(g_matrix(fp, p) @ p.q.as_array(), horizontal_gradient(surface, p)))
    return _at_most(worst, 1e-12)


def check_characteristic_guard(rng, counts):
    paraboloid = build_surface('paraboloid-sqrt43')
    origin = HeisPoint.origin()
    try:
        hmc(paraboloid.surface, origin)
    except DomainError:
        raised = True
    else:
        raised = False
    ok = raised and is_characteristic(paraboloid.surface, origin)
    return (0.0 if ok else 1.0), 0.0, "origin of the paraboloid is characteristic"


def check_normal_limit(rng, counts):
    worst = 0.0
    entry = build_surface('koranyi-sphere', {'R': 1.0})
    big = MetricParams.symmetric(1e3)
    for _ in range(counts.hmc_points):
        p = _rotated_profile_point(rng, entry.profile, float(rng.uniform(0.3, 0.9)))
        worst = max(worst, float(np.max(np.abs(riemannian_normal(entry.surface, p, big)[:4]
                                               - horizontal_normal(entry.surface, p)))))
    return _at_most(worst, 1e-5)


def check_cc_sphere_profile(rng, counts):
    f, _, _ = cc_sphere_profile(1.0, 0.5)
    on_sphere = abs(cc_distance_origin(HeisPoint(Quaternion(0.5, 0.0, 0.0, 0.0), PureQuaternion(f, 0.0, 0.0))) - 1.0)
    halving = cc_profile_step_halving(1.0, 0.5)
    return _at_most(max(on_sphere, halving.error), 1e-5, f"H0 at r = R/2: {halving.richardson:.9f}")


SUITES: Dict[str, List[Tuple[str, Check]]] = {
    'algebra': [
        ('quaternion_norm', check_quaternion_norm),
        ('quaternion_associativity', check_quaternion_associativity),
        ('exp_pure', check_exp_pure),
        ('group_axioms', check_group_axioms),
        ('koranyi_distance', check_koranyi_distance),
        ('automorphisms', check_automorphisms),
        ('inversion', check_inversion),
        ('inversion_distortion', check_inversion_distortion),
        ('frame_duality', check_frame_duality),
        ('bracket_table', check_bracket_table),
        ('dtheta', check_dtheta),
        ('left_invariance', check_left_invariance),
    ],
    'geodesics': [
        ('vertical_coeffs', check_vertical_coeffs),
        ('connect', check_connect),
        ('gl_first_integrals', check_gl_first_integrals),
        ('gl_length', check_gl_length),
        ('vertical_coefficient_oracle', check_vertical_coefficient_oracle),
        ('bvp_round_trip', check_bvp_round_trip),
        ('sphere_round_trip', check_sphere_round_trip),
        ('cc_special_values', check_cc_special_values),
        ('comparison_ratio', check_comparison_ratio),
        ('cc_metric_axioms', check_cc_metric_axioms),
        ('x0_residual', check_x0_residual),
        ('geodesic_through', check_geodesic_through),
        ('l_ladder', check_l_ladder),
    ],
    'curvature': [
        ('sectional_table', check_sectional_table),
        ('connection_properties', check_connection_properties),
        ('ricci_flags', check_ricci_flags),
    ],
    'hmc': [
        ('minimal_examples', check_minimal_examples),
        ('koranyi_sphere', check_koranyi_sphere),
        ('profile_formula', check_profile_formula),
        ('g_matrix', check_g_matrix),
        ('characteristic_guard', check_characteristic_guard),
        ('normal_limit', check_normal_limit),
        ('cc_sphere_profile', check_cc_sphere_profile),
    ],
}


def resolve_suites(name: str) -> List[str]:
    if name == 'all':
        return list(SUITE_NAMES)
    if name not in SUITES:
        raise ParameterError(f"Unknown suite '{name}', choose from all, {', '.join(SUITE_NAMES)}")
    return [name]


def run_check(suite: str, name: str, check: Check, seed: int, counts: VerifyCounts) -> CheckResult:
    """Run one check with its own generator so results do not depend on suite order."""
    rng = np.random.default_rng([seed, SUITE_NAMES.index(suite), sum(map(ord, name))])
    start = time.perf_counter()
    try:
        value, tolerance, message = check(rng, counts)
        passed = value <= tolerance
    except GeometryError as e:
        log_error_with_context(logger, f"Check {suite}/{name} raised", e,
                               {'suite': suite, 'check': name, 'seed': seed}, include_traceback=False)
        value, tolerance, message, passed = math.inf, 0.0, f"{type(e).__name__}: {e}", False
    except (ValueError, ArithmeticError) as e:
        error = SolverError(str(e), original_exception=e)
        log_error_with_context(logger, f"Check {suite}/{name} failed numerically", error,
                               {'suite': suite, 'check': name, 'seed': seed})
        value, tolerance, message, passed = math.inf, 0.0, f"SolverError: {type(e).__name__}: {e}", False
    elapsed = time.perf_counter() - start
    logger.debug(f"{suite}/{name}: {value:.3e} (tol {tolerance:.1e})",
                 extra={'suite': suite, 'check': name, 'residual': value, 'tolerance': tolerance,
                        'seed': seed, 'elapsed_time': elapsed})
    return CheckResult(suite, name, passed, value, tolerance, message, elapsed)


def run_suites(
    names: Sequence[str],
    seed: int = 42,
    counts: Optional[VerifyCounts] = None,
    progress: bool = True
) -> List[CheckResult]:
    counts = counts or VerifyCounts()
    plan = [(suite, name, check) for suite in names for name, check in SUITES[suite]]
    results = []
    for suite, name, check in tqdm(plan, desc='verify', unit='check', disable=not progress, file=sys.stderr):
        results.append(run_check(suite, name, check, seed, counts))
    return results


def print_status(check_name: str, passed: bool, message: str = "", color: bool = True, stream=None):
    """Print check result with pass/fail indicator"""
    stream = stream or sys.stdout
    status = "[PASS]" if passed else "[FAIL]"
    full_message = f"{check_name}: {message}" if message else check_name
    if color:
        status_color = "\033[92m" if passed else "\033[91m"
        reset_color = "\033[0m"
        print(f"{status_color}{status:8}{reset_color} | {full_message}", file=stream)
    else:
        print(f"{status:8} | {full_message}", file=stream)


def print_table(results: Sequence[CheckResult], color: Optional[bool] = None, stream=None):
    stream = stream or sys.stdout
    if color is None:
        color = hasattr(stream, 'isatty') and stream.isatty()
    for result in results:
        detail = f"{result.value:.3e} <= {result.tolerance:.1e}"
        if result.message:
            detail = f"{detail} ({result.message})"
        print_status(f"{result.suite}/{result.name}", result.passed, detail, color, stream)
    failures = sum(1 for r in results if not r.passed)
    print(f"{len(results) - failures}/{len(results)} checks passed", file=stream)
