"""
Integration tests running the verify suites end to end.
"""
import io

import pytest

from hqgeo.utils.exceptions import ParameterError, SolverError
from hqgeo.verify.suites import (
    SUITE_NAMES,
    SUITES,
    CheckResult,
    VerifyCounts,
    print_table,
    resolve_suites,
    run_check,
    run_suites,
)


@pytest.mark.integration
@pytest.mark.slow
@pytest.mark.parametrize("suite", SUITE_NAMES)
def test_suite_passes_quick(suite):
    results = run_suites([suite], seed=42, counts=VerifyCounts.quick(), progress=False)
    failed = [f"{r.name}: {r.value:.3e} > {r.tolerance:.1e} {r.message}" for r in results if not r.passed]
    assert not failed
    assert [r.name for r in results] == [name for name, _ in SUITES[suite]]


@pytest.mark.integration
class TestRunner:
    def test_resolve_suites(self):
        assert resolve_suites('all') == list(SUITE_NAMES)
        assert resolve_suites('hmc') == ['hmc']
        with pytest.raises(ParameterError):
            resolve_suites('topology')

    def test_results_are_reproducible(self):
        first = run_suites(['curvature'], seed=7, counts=VerifyCounts.quick(), progress=False)
        second = run_suites(['curvature'], seed=7, counts=VerifyCounts.quick(), progress=False)
        assert [r.value for r in first] == [r.value for r in second]

    def test_raising_check_fails(self):
        def broken(rng, counts):
            raise SolverError("bracket lost")

        result = run_check('algebra', 'broken', broken, 42, VerifyCounts.quick())
        assert not result.passed
        assert 'SolverError' in result.message

    def test_numerical_failure_in_check_fails(self):
        def overflowing(rng, counts):
            raise ValueError("f(a) and f(b) must have different signs")

        result = run_check('geodesics', 'overflowing', overflowing, 42, VerifyCounts.quick())
        assert not result.passed
        assert result.message.startswith('SolverError')
        assert 'different signs' in result.message

    def test_print_table(self):
        stream = io.StringIO()
        print_table([
            CheckResult('algebra', 'ok', True, 1e-15, 1e-12),
            CheckResult('hmc', 'bad', False, 1.0, 1e-9, 'too large'),
        ], stream=stream)
        lines = stream.getvalue().splitlines()
        assert lines[0].startswith('[PASS]')
        assert lines[1].startswith('[FAIL]')
        assert lines[1].endswith('(too large)')
        assert lines[-1] == '1/2 checks passed'
