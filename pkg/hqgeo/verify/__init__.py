from hqgeo.verify.suites import (
    SUITES,
    CheckResult,
    VerifyCounts,
    print_status,
    print_table,
    resolve_suites,
    run_suites,
)

__all__ = [
    'SUITES',
    'CheckResult',
    'VerifyCounts',
    'print_status',
    'print_table',
    'resolve_suites',
    'run_suites',
]
