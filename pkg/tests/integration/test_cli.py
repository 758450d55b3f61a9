"""
End-to-end tests of the run_hqgeo command line.
"""
import json
import math

import pytest

import run_hqgeo
from hqgeo.utils.config import OUTPUT_DIR_ENV
from hqgeo.utils.exceptions import EvaluationError
from hqgeo.version import __version__

ORIGIN = '0,0,0,0,0,0,0'
UNIT_X = '1,0,0,0,0,0,0'


@pytest.fixture(autouse=True)
def isolated_cwd(tmp_path, monkeypatch):
    """Keep .env lookups and relative outputs inside a scratch directory."""
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv(OUTPUT_DIR_ENV, raising=False)
    return tmp_path


def run_cli(capsys, *argv):
    code = run_hqgeo.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.mark.integration
class TestDist:
    def test_unit_example_csv(self, capsys):
        code, out, _ = run_cli(capsys, 'dist', '--from', ORIGIN, '--to', UNIT_X)
        assert code == 0
        assert out == "d_cc,d_k,ratio\n1.0,1.0,1.0\n"

    def test_negative_coordinates(self, capsys):
        code, out, _ = run_cli(capsys, 'dist', '--from', ORIGIN, '--to=-1,0,0,0,0,0,0', '--metric', 'cc')
        assert code == 0
        assert out == "d_cc\n1.0\n"

    def test_json_document(self, capsys):
        code, out, _ = run_cli(capsys, '--format', 'json', 'dist', '--from', ORIGIN, '--to', '0,0,0,0,0,0,1')
        document = json.loads(out)
        assert code == 0
        assert document['command'] == 'dist'
        assert document['schema'] == 'hqgeo/1'
        assert document['rows'][0]['d_cc'] == pytest.approx(math.sqrt(math.pi))
        assert document['rows'][0]['d_k'] == pytest.approx(1.0)

    def test_as_published_pole(self, capsys):
        code, out, _ = run_cli(capsys, '--as-published', '--format', 'json', 'dist', '--from', ORIGIN,
                               '--to', '0,0,0,0,0,0,1', '--metric', 'cc')
        assert code == 0
        assert json.loads(out)['rows'][0]['d_cc'] == pytest.approx(math.sqrt(math.pi / 2.0))

    def test_deterministic(self, capsys):
        argv = ('dist', '--from', '0.1,0.2,0.3,0.4,0.5,0.6,0.7', '--to', '1,-1,0.5,0,2,0,-1')
        _, first, _ = run_cli(capsys, *argv)
        _, second, _ = run_cli(capsys, *argv)
        assert first == second


@pytest.mark.integration
class TestCommands:
    def test_hmc_koranyi(self, capsys):
        code, out, _ = run_cli(capsys, '--format', 'json', 'hmc', '--surface', 'koranyi-sphere',
                               '--params', 'R=1', '--grid', 'r=0.5')
        row = json.loads(out)['rows'][0]
        assert code == 0
        assert row['hmc'] == pytest.approx(4.5, rel=1e-9)
        assert row['published'] == pytest.approx(4.5)

    def test_hmc_grid(self, capsys):
        code, out, _ = run_cli(capsys, 'hmc', '--surface', 'paraboloid-sqrt43', '--grid', 'r=0.5:2:4')
        lines = out.strip().split('\n')
        assert code == 0
        assert lines[0].startswith('surface,r,x1')
        assert len(lines) == 5

    def test_curvature_json(self, capsys):
        code, out, _ = run_cli(capsys, '--format', 'json', 'curvature', '--L', '1')
        document = json.loads(out)
        assert code == 0
        assert document['ricci_trace']['xi1'] == pytest.approx(-24.0)
        assert document['paper_match_flags']['sectional'] is True

    def test_geodesic_cc(self, capsys):
        code, out, _ = run_cli(capsys, '--format', 'json', 'geodesic', '--target', '0.3,-0.5,0.2,0.9,1,-0.4,0.25',
                               '--samples', '17')
        document = json.loads(out)
        assert code == 0
        assert document['metric'] == 'cc'
        assert len(document['rows']) == 17
        end = document['rows'][-1]
        assert [end[k] for k in ('x1', 'x2', 'x3', 'x4', 't1', 't2', 't3')] == pytest.approx(
            [0.3, -0.5, 0.2, 0.9, 1.0, -0.4, 0.25], abs=1e-8)

    def test_geodesic_gl(self, capsys):
        code, out, _ = run_cli(capsys, '--format', 'json', 'geodesic', '--target', '1,0,0,0,0.5,0,0',
                               '--L', '2', '--samples', '9')
        document = json.loads(out)
        assert code == 0
        assert document['metric'] == 'gL'
        assert document['endpoint_error'] <= 1e-9

    def test_sphere(self, capsys):
        code, out, _ = run_cli(capsys, '--format', 'json', 'sphere', '--radius', '2', '--samples', '20',
                               '--metric', 'koranyi')
        rows = json.loads(out)['rows']
        assert code == 0
        assert len(rows) == 20
        assert all(row['distance'] == pytest.approx(2.0) for row in rows)

    def test_path(self, capsys):
        code, out, _ = run_cli(capsys, '--format', 'json', 'path', '--from', ORIGIN,
                               '--to', '0.5,0.5,0,0,1,0,0', '--samples', '33')
        document = json.loads(out)
        assert code == 0
        assert document['endpoint_error'] <= 1e-8
        assert document['max_res_horizontality'] <= 1e-8
        assert document['length_cc'] >= document['d_cc'] - 1e-9

    def test_path_as_published(self, capsys):
        code, out, _ = run_cli(capsys, '--as-published', '--format', 'json', 'path', '--from', ORIGIN,
                               '--to', '0,0,0,0,0,0,1', '--samples', '17')
        document = json.loads(out)
        assert code == 0
        assert document['d_cc'] == pytest.approx(math.sqrt(math.pi / 2.0))
        assert document['length_cc'] >= document['d_cc']

    def test_as_published_help_names_scope(self, capsys):
        code, out, _ = run_cli(capsys, '--help')
        assert code == 0
        assert 'group law is unchanged' in ' '.join(out.split())

    def test_report(self, capsys):
        code, out, _ = run_cli(capsys, '--format', 'json', 'report')
        document = json.loads(out)
        assert code == 0
        assert document['mismatches'] > 0
        assert 'group_law' in document['sections']

    def test_verify_quick_suite(self, capsys):
        code, out, _ = run_cli(capsys, '--no-progress-bar', 'verify', '--suite', 'curvature', '--quick')
        assert code == 0
        assert '[PASS]' in out
        assert out.strip().endswith('3/3 checks passed')


@pytest.mark.integration
class TestExitCodes:
    def test_version(self, capsys):
        code, out, _ = run_cli(capsys, '--version')
        assert code == 0
        assert __version__ in out

    def test_bad_flag(self, capsys):
        code, _, err = run_cli(capsys, 'dist', '--from', ORIGIN)
        assert code == 2
        assert '--to' in err

    def test_bad_point(self, capsys):
        code, _, _ = run_cli(capsys, 'dist', '--from', '1,2,3', '--to', UNIT_X)
        assert code == 2

    def test_domain_error(self, capsys):
        code, out, err = run_cli(capsys, 'hmc', '--surface', 'paraboloid-sqrt43', '--grid', 'r=0')
        assert code == 1
        assert out == ''
        assert 'paraboloid-sqrt43' in err

    def test_numerical_failure(self, capsys, mocker):
        def failing(args, config):
            raise FloatingPointError("overflow encountered")

        mocker.patch.dict(run_hqgeo.COMMANDS, {'report': failing})
        code, out, err = run_cli(capsys, 'report')
        assert code == 1
        assert out == ''
        assert 'numerical failure in report' in err

    def test_evaluation_error(self, capsys, mocker):
        def failing(args, config):
            raise EvaluationError("non-finite value")

        mocker.patch.dict(run_hqgeo.COMMANDS, {'report': failing})
        code, out, err = run_cli(capsys, 'report')
        assert code == 1
        assert out == ''
        assert 'non-finite value' in err


@pytest.mark.integration
class TestConfigAndOutput:
    def test_config_supplies_required_flags(self, capsys, tmp_path):
        config = tmp_path / 'config.yaml'
        config.write_text(
            "format: json\n"
            "dist:\n"
            f"  from: [{ORIGIN}]\n"
            f"  to: [{UNIT_X}]\n"
            "  metric: cc\n"
        )
        code, out, _ = run_cli(capsys, '--config', str(config), 'dist')
        assert code == 0
        assert json.loads(out)['rows'] == [{'d_cc': 1.0}]

    def test_flags_override_config(self, capsys, tmp_path):
        config = tmp_path / 'config.yaml'
        config.write_text("format: json\n")
        code, out, _ = run_cli(capsys, '--config', str(config), '--format', 'csv', 'dist',
                               '--from', ORIGIN, '--to', UNIT_X, '--metric', 'koranyi')
        assert code == 0
        assert out == "d_k\n1.0\n"

    def test_unknown_config_key(self, capsys, tmp_path):
        config = tmp_path / 'config.yaml'
        config.write_text("dist:\n  colour: red\n")
        code, _, err = run_cli(capsys, '--config', str(config), 'dist', '--from', ORIGIN, '--to', UNIT_X)
        assert code == 1
        assert 'colour' in err

    def test_missing_config(self, capsys, tmp_path):
        code, _, _ = run_cli(capsys, '--config', str(tmp_path / 'absent.yaml'), 'report')
        assert code == 1

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / 'dist.csv'
        code, out, _ = run_cli(capsys, '--output', str(target), 'dist', '--from', ORIGIN, '--to', UNIT_X)
        assert code == 0
        assert out == ''
        assert target.read_text() == "d_cc,d_k,ratio\n1.0,1.0,1.0\n"

    def test_output_dir_environment(self, capsys, tmp_path, monkeypatch):
        out_dir = tmp_path / 'artifacts'
        monkeypatch.setenv(OUTPUT_DIR_ENV, str(out_dir))
        code, _, _ = run_cli(capsys, '--output', 'dist.csv', 'dist', '--from', ORIGIN, '--to', UNIT_X)
        assert code == 0
        assert (out_dir / 'dist.csv').exists()

    def test_log_records_run_parameters(self, capsys, tmp_path):
        log_dir = tmp_path / 'logs'
        target = tmp_path / 'dist.csv'
        code, _, err = run_cli(capsys, '--log-dir', str(log_dir), '--output', str(target), 'dist',
                               '--from', ORIGIN, '--to', UNIT_X, '--metric', 'cc')
        assert code == 0
        assert 'dist: wrote 1 rows' in err
        text = next(log_dir.glob('hqgeo_*.log')).read_text()
        assert '"operation": "dist"' in text
        assert '"metric": "cc"' in text

    def test_log_dir(self, capsys, tmp_path):
        log_dir = tmp_path / 'logs'
        code, _, _ = run_cli(capsys, '--log-dir', str(log_dir), 'hmc', '--surface', 'koranyi-sphere',
                             '--grid', 'r=2')
        assert code == 1
        logs = list(log_dir.glob('hqgeo_*.log'))
        assert len(logs) == 1
        assert 'koranyi-sphere' in logs[0].read_text()
