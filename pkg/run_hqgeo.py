#!/usr/bin/env python3
"""
Command-line surface of the hqgeo kernel.

Every subcommand writes a CSV table or a JSON document to standard output,
or atomically to --output. Diagnostics go to standard error.
"""

import argparse
import math
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from hqgeo.cc.metric import cc_distance, cc_distance_origin, cc_geodesic_through, cc_sphere_points
from hqgeo.group.heisenberg import HeisPoint, koranyi_distance, koranyi_gauge_array
from hqgeo.group.sampling import koranyi_sphere_points
from hqgeo.paths.horizontal import connect, length_cc
from hqgeo.riemann.connection import MetricParams, curvature_report
from hqgeo.riemann.geodesics import gl_bvp_endpoint_error, gl_geodesic_curve, gl_length, solve_gl_bvp
from hqgeo.surfaces.catalog import SURFACES, build_surface
from hqgeo.surfaces.hmc import hmc, hmc_profile
from hqgeo.utils.config import (
    DEFAULT_SEED,
    OUTPUT_FORMATS,
    RunConfig,
    load_config_file,
    load_environment,
    resolve_output_path,
    split_config,
)
from hqgeo.utils.exceptions import GeometryError, InputError, SolverError
from hqgeo.utils.export import CURVE_FIELDS, POINT_FIELDS, Artifact, curve_rows, emit, point_row
from hqgeo.utils.logger import get_logger, log_error_with_context, log_info_with_context, setup_logger
from hqgeo.verify.report import REPORT_FIELDS, discrepancy_report
from hqgeo.verify.suites import SUITE_NAMES, VerifyCounts, print_table, resolve_suites, run_suites
from hqgeo.version import __version__

SUBCOMMANDS = ('dist', 'geodesic', 'sphere', 'curvature', 'hmc', 'path', 'verify', 'report')
DEFAULT_SAMPLES = 257
DEFAULT_SPHERE_SAMPLES = 1000
DEFAULT_GRID = 'r=0.5'
# config keys that differ from the argparse destination
CONFIG_ALIASES = {'from': 'start', 'to': 'end'}


def parse_point(text: str) -> HeisPoint:
    """Seven comma-separated reals x1,x2,x3,x4,t1,t2,t3."""
    values = _parse_floats(text)
    if len(values) != 7:
        raise argparse.ArgumentTypeError(f"a point needs 7 comma-separated values, got {len(values)}")
    return HeisPoint.from_array(values)


def parse_metric(text: str) -> MetricParams:
    """One value for L1 = L2 = L3, or three values l1,l2,l3."""
    values = _parse_floats(text)
    if len(values) == 1:
        values = values * 3
    if len(values) != 3:
        raise argparse.ArgumentTypeError(f"--L takes 1 or 3 values, got {len(values)}")
    if not all(v > 0.0 for v in values):
        raise argparse.ArgumentTypeError("--L values must be positive")
    return MetricParams(*values)


def parse_params(text: str) -> Dict[str, float]:
    """Comma-separated name=value pairs, e.g. R=1."""
    params = {}
    for item in filter(None, (part.strip() for part in text.split(','))):
        name, sep, value = item.partition('=')
        if not sep:
            raise argparse.ArgumentTypeError(f"expected name=value, got '{item}'")
        params[name.strip()] = _parse_floats(value)[0]
    return params


def parse_grid(text: str) -> np.ndarray:
    """r=v or r=start:stop:count."""
    name, sep, spec = text.partition('=')
    if not sep or name.strip() != 'r':
        raise argparse.ArgumentTypeError(f"grid must look like r=v or r=start:stop:count, got '{text}'")
    parts = spec.split(':')
    if len(parts) == 1:
        return np.array(_parse_floats(parts[0]))
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"grid must look like r=v or r=start:stop:count, got '{text}'")
    start, stop = _parse_floats(parts[0])[0], _parse_floats(parts[1])[0]
    try:
        count = int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid count must be an integer, got '{parts[2]}'")
    if count < 1:
        raise argparse.ArgumentTypeError("grid count must be at least 1")
    return np.linspace(start, stop, count)


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got '{text}'")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def positive_float(text: str) -> float:
    value = _parse_floats(text)[0]
    if not value > 0.0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {value}")
    return value


def _parse_floats(text: str) -> List[float]:
    try:
        values = [float(part) for part in str(text).split(',') if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot read numbers from '{text}'")
    if not values or not all(math.isfinite(v) for v in values):
        raise argparse.ArgumentTypeError(f"expected finite numbers, got '{text}'")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='run_hqgeo', description='Quaternionic Heisenberg group geometry kernel')
    parser.add_argument('--format', choices=OUTPUT_FORMATS, default='csv', help='Output format (default: csv)')
    parser.add_argument('--output', help='Write the artifact to this file instead of standard output')
    parser.add_argument('--seed', type=int, default=DEFAULT_SEED, help=f'Seed for randomized suites (default: {DEFAULT_SEED})')
    parser.add_argument('--as-published', action='store_true', help='Use the printed vertical coefficient 4 in distances, geodesics, spheres and hmc; the group law is unchanged')
    parser.add_argument('--config', help='YAML file with default flag values')
    parser.add_argument('--log-dir', help='Also write a structured log file to this directory')
    parser.add_argument('--no-progress-bar', action='store_true', help='Disable the verify progress bar')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')

    sub = parser.add_subparsers(dest='command', metavar='command')
    sub.required = True

    dist = sub.add_parser('dist', help='Distances between two points')
    dist.add_argument('--from', dest='start', type=parse_point, required=True, help='x1,x2,x3,x4,t1,t2,t3')
    dist.add_argument('--to', dest='end', type=parse_point, required=True, help='x1,x2,x3,x4,t1,t2,t3')
    dist.add_argument('--metric', choices=('cc', 'koranyi', 'both'), default='both')

    geodesic = sub.add_parser('geodesic', help='Sampled geodesic from the origin to a target')
    geodesic.add_argument('--target', type=parse_point, required=True, help='x1,x2,x3,x4,t1,t2,t3')
    geodesic.add_argument('--L', dest='L', type=parse_metric, help='g_L geodesic for L or l1,l2,l3; CC geodesic if omitted')
    geodesic.add_argument('--samples', type=positive_int, default=DEFAULT_SAMPLES)

    sphere = sub.add_parser('sphere', help='Quasi-uniform samples of a sphere about the origin')
    sphere.add_argument('--radius', type=positive_float, required=True)
    sphere.add_argument('--samples', type=positive_int, default=DEFAULT_SPHERE_SAMPLES)
    sphere.add_argument('--metric', choices=('cc', 'koranyi'), default='cc')

    curvature = sub.add_parser('curvature', help='Sectional, Ricci and scalar curvature of g_L')
    curvature.add_argument('--L', dest='L', type=parse_metric, required=True, help='L or l1,l2,l3')

    hmc_parser = sub.add_parser('hmc', help='Horizontal mean curvature of a catalog surface over a radius grid')
    hmc_parser.add_argument('--surface', choices=list(SURFACES), required=True)
    hmc_parser.add_argument('--params', type=parse_params, default={}, help='name=value pairs, e.g. R=1')
    hmc_parser.add_argument('--grid', type=parse_grid, default=DEFAULT_GRID, help='r=v or r=start:stop:count')

    path = sub.add_parser('path', help='Horizontal path between two points')
    path.add_argument('--from', dest='start', type=parse_point, required=True, help='x1,x2,x3,x4,t1,t2,t3')
    path.add_argument('--to', dest='end', type=parse_point, required=True, help='x1,x2,x3,x4,t1,t2,t3')
    path.add_argument('--samples', type=positive_int, default=DEFAULT_SAMPLES, help='Samples per smooth segment')

    verify = sub.add_parser('verify', help='Run the invariant suites')
    verify.add_argument('--suite', choices=('all',) + SUITE_NAMES, default='all')
    verify.add_argument('--quick', action='store_true', help='Fewer random trials per check')

    sub.add_parser('report', help='Printed constants and formulas against computed values')
    return parser


def _config_value(value: Any) -> Any:
    if isinstance(value, (list, tuple)):
        return ','.join(str(v) for v in value)
    if isinstance(value, dict):
        return ','.join(f"{k}={v}" for k, v in value.items())
    if isinstance(value, bool) or value is None:
        return value
    return str(value)


def apply_config(parser: argparse.ArgumentParser, path: str):
    """
    Install YAML defaults on the parser and its subparsers; explicit flags still win.

    Raises:
        InputError: Unreadable file or a key no flag accepts
    """
    config = load_config_file(path)
    globals_, sections = split_config(config, SUBCOMMANDS)
    subparsers = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction)).choices

    def install(target: argparse.ArgumentParser, values: Dict[str, Any], where: str):
        known = {action.dest for action in target._actions}
        defaults = {}
        for key, value in values.items():
            dest = CONFIG_ALIASES.get(key, key)
            if dest not in known:
                raise InputError(f"Unknown config key '{key}' in {where}")
            defaults[dest] = _config_value(value)
        target.set_defaults(**defaults)
        # a configured value satisfies a required flag
        for action in target._actions:
            if action.dest in defaults:
                action.required = False

    install(parser, globals_, path)
    for name, section in sections.items():
        install(subparsers[name], section, f"{path}:{name}")


def _ratio(d_cc: float, d_k: float) -> Optional[float]:
    return d_cc / d_k if d_k > 0.0 else None


def cmd_dist(args, config: RunConfig) -> Artifact:
    row: Dict[str, Any] = {}
    if args.metric in ('cc', 'both'):
        row['d_cc'] = cc_distance(args.start, args.end, config.as_published)
    if args.metric in ('koranyi', 'both'):
        row['d_k'] = koranyi_distance(args.start, args.end)
    if args.metric == 'both':
        row['ratio'] = _ratio(row['d_cc'], row['d_k'])
    return Artifact('dist', [row], list(row))


def cmd_geodesic(args, config: RunConfig) -> Artifact:
    if args.L is None:
        geodesic, radius = cc_geodesic_through(args.target, config.as_published)
        curve = geodesic.curve(radius, args.samples, config.as_published)
        meta = {'metric': 'cc', 'A': geodesic.A.as_array(), 'B': geodesic.B.as_array(), 'length': radius}
    else:
        g = solve_gl_bvp(args.target, args.L, config.as_published)
        curve = gl_geodesic_curve(g, args.samples, config.as_published)
        meta = {'metric': 'gL', 'L': args.L.as_array(), 'CL': g.CL.as_array(), 'C': g.C.as_array(),
                'length': gl_length(g),
                'endpoint_error': gl_bvp_endpoint_error(args.target, args.L, config.as_published)}
    rows = curve_rows(curve)
    return Artifact('geodesic', rows, CURVE_FIELDS, dict(meta, target=args.target.as_array(), rows=rows))


def cmd_sphere(args, config: RunConfig) -> Artifact:
    if args.metric == 'cc':
        points = cc_sphere_points(args.radius, args.samples, config.as_published)
        distances = [cc_distance_origin(HeisPoint.from_array(row), config.as_published) for row in points]
    else:
        points = koranyi_sphere_points(args.radius, args.samples)
        distances = koranyi_gauge_array(points)
    rows = [point_row(p, distance=float(d)) for p, d in zip(points, distances)]
    return Artifact('sphere', rows, POINT_FIELDS + ['distance'],
                    {'metric': args.metric, 'radius': args.radius, 'rows': rows})


def cmd_curvature(args, config: RunConfig) -> Artifact:
    report = curvature_report(args.L)
    rows = [{'quantity': 'sectional', 'label': k, 'computed': v, 'published': report.sectional_published[k]}
            for k, v in report.sectional.items()]
    for label, value in report.ricci_mean.items():
        rows.append({'quantity': 'ricci_mean', 'label': label, 'computed': value,
                     'published': report.ricci_published[label]})
    for label, value in report.ricci_trace.items():
        rows.append({'quantity': 'ricci_trace', 'label': label, 'computed': value,
                     'published': report.ricci_published[label]})
    rows.append({'quantity': 'scalar_paper_convention', 'label': '', 'computed': report.scalar_paper_convention,
                 'published': report.scalar_published})
    rows.append({'quantity': 'scalar_trace', 'label': '', 'computed': report.scalar_trace,
                 'published': report.scalar_published})
    return Artifact('curvature', rows, ['quantity', 'label', 'computed', 'published'], report.to_dict())


def cmd_hmc(args, config: RunConfig) -> Artifact:
    entry = build_surface(args.surface, args.params, config.as_published)
    rows = []
    for r in args.grid:
        r = float(r)
        entry.check_radius(r)
        p = entry.point(r)
        row = {'surface': entry.name, 'r': r}
        row.update(point_row(p.as_array()))
        row['hmc'] = hmc(entry.surface, p)
        row['hmc_profile'] = hmc_profile(entry.profile, r) if entry.profile is not None and r > 0.0 else None
        row['published'] = entry.published(r) if entry.published is not None else None
        rows.append(row)
    fields = ['surface', 'r'] + POINT_FIELDS + ['hmc', 'hmc_profile', 'published']
    return Artifact('hmc', rows, fields, {'surface': entry.name, 'params': dict(args.params), 'rows': rows})


def cmd_path(args, config: RunConfig) -> Artifact:
    curve = connect(args.start, args.end, args.samples)
    rows = curve_rows(curve)
    summary = {
        'length_cc': length_cc(curve),
        'd_cc': cc_distance(args.start, args.end, config.as_published),
        'endpoint_error': float(np.max(np.abs(curve.end.as_array() - args.end.as_array()))),
        'max_res_horizontality': max(row['res_horizontality'] for row in rows),
    }
    return Artifact('path', rows, CURVE_FIELDS, dict(summary, rows=rows))


def run_verify(args, config: RunConfig) -> int:
    """
    Run the suites and print the pass/fail table.

    The table goes to standard output unless JSON was requested there; with
    --output the artifact is written in the chosen format as well.

    Returns:
        0 when every check passed, 1 otherwise
    """
    counts = VerifyCounts.quick() if args.quick else VerifyCounts()
    results = run_suites(resolve_suites(args.suite), config.seed, counts, config.progress)
    rows = [r.to_row() for r in results]
    failures = sum(1 for r in results if not r.passed)
    artifact = Artifact('verify', rows, ['suite', 'check', 'passed', 'value', 'tolerance', 'message'],
                        {'seed': config.seed, 'suite': args.suite, 'failures': failures, 'rows': rows})
    if config.output_path:
        emit(artifact, config.output_format, config.output_path)
    if config.output_path or config.output_format == 'csv':
        print_table(results)
    else:
        emit(artifact, config.output_format)
    return 1 if failures else 0


def cmd_report(args, config: RunConfig) -> Artifact:
    document, rows = discrepancy_report()
    return Artifact('report', rows, REPORT_FIELDS, document)


COMMANDS: Dict[str, Callable[[argparse.Namespace, RunConfig], Artifact]] = {
    'dist': cmd_dist,
    'geodesic': cmd_geodesic,
    'sphere': cmd_sphere,
    'curvature': cmd_curvature,
    'hmc': cmd_hmc,
    'path': cmd_path,
    'report': cmd_report,
}

GLOBAL_DESTS = ('format', 'output', 'seed', 'as_published', 'config', 'log_dir', 'no_progress_bar', 'command')


def parse_args(argv: Sequence[str]) -> argparse.Namespace:
    """
    Parse argv, installing --config defaults first.

    Raises:
        SystemExit: On flag errors (code 2), --help or --version (code 0)
        InputError: If the config file cannot be used
    """
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument('--config')
    known, _ = pre.parse_known_args(argv)
    parser = build_parser()
    if known.config:
        apply_config(parser, known.config)
    return parser.parse_args(argv)


def build_run_config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        subcommand=args.command,
        params={k: v for k, v in vars(args).items() if k not in GLOBAL_DESTS},
        output_format=args.format,
        output_path=resolve_output_path(args.output),
        seed=args.seed,
        as_published=args.as_published,
        log_dir=args.log_dir,
        progress=not args.no_progress_bar,
    )


def run(args: argparse.Namespace, config: RunConfig) -> int:
    """Execute one parsed command line and return its exit code."""
    if config.subcommand == 'verify':
        return run_verify(args, config)

    artifact = COMMANDS[config.subcommand](args, config)
    emit(artifact, config.output_format, config.output_path)
    if config.output_path:
        log_info_with_context(
            get_logger(),
            f"{config.subcommand}: wrote {len(artifact.rows)} rows to {config.output_path}",
            {'operation': config.subcommand, 'params': config.params}
        )
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    load_environment()

    try:
        args = parse_args(argv)
        config = build_run_config(args)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    except GeometryError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1

    logger = setup_logger('hqgeo', log_dir=config.log_dir)

    try:
        return run(args, config)
    except GeometryError as e:
        log_error_with_context(logger, f"error: {e}", e, {'operation': config.subcommand}, include_traceback=False)
        return 1
    except (ValueError, ArithmeticError) as e:
        error = SolverError(f"numerical failure in {config.subcommand}: {e}", original_exception=e)
        log_error_with_context(logger, f"error: {error}", error, {'operation': config.subcommand})
        return 1


if __name__ == '__main__':
    sys.exit(main())
