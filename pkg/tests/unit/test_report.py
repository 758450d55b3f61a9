"""
Unit tests for the printed-versus-computed discrepancy report.
"""
import pytest

from hqgeo.group.heisenberg import HeisPoint
from hqgeo.verify.report import (
    REPORT_FIELDS,
    discrepancy_report,
    euclidean_sphere_rows,
    group_law_rows,
    hyperplane_rows,
    left_invariance_defect,
    pole_distance_rows,
    vertical_coefficient_rows,
)


def _by_quantity(rows):
    return {row['quantity']: row for row in rows}


@pytest.mark.unit
class TestSections:
    def test_vertical_coefficient(self):
        rows = _by_quantity(vertical_coefficient_rows())
        assert rows['beta1(1) corrected closed form']['match']
        assert not rows['beta1(1) printed closed form']['match']
        assert rows['beta2(1) printed closed form']['match']

    def test_pole_distance(self):
        rows = pole_distance_rows()
        assert [row['match'] for row in rows] == [True, False]

    def test_group_law_ordering(self):
        rows = group_law_rows()
        assert rows[0]['computed'] == pytest.approx(-2.0)
        assert rows[0]['published'] == pytest.approx(2.0)
        assert not rows[0]['match']
        assert rows[1]['match']
        assert not rows[2]['match']

    def test_left_invariance_defect(self):
        g = HeisPoint.from_array([1.0, 0.5, -0.2, 0.3, 0.0, 0.1, 0.2])
        assert left_invariance_defect(g) < 1e-7
        assert left_invariance_defect(g, as_published=True) > 1e-2

    def test_euclidean_sphere(self):
        rows = euclidean_sphere_rows()
        assert rows[0]['match']
        assert not rows[1]['match']
        assert rows[1]['computed'] == pytest.approx(3.368, abs=1e-3)

    def test_hyperplane_is_not_characteristic(self):
        rows = hyperplane_rows()
        assert rows[0]['computed'] == pytest.approx(1.0)
        assert rows[1]['computed'] == 0.0
        assert not any(row['match'] for row in rows)


@pytest.mark.unit
class TestDocument:
    def test_document_shape(self):
        document, rows = discrepancy_report()
        assert set(document) == {'sections', 'mismatches', 'rows_total'}
        assert document['rows_total'] == len(rows)
        assert document['mismatches'] == sum(1 for row in rows if not row['match'])
        assert set(document['sections']) == {
            'vertical_coefficient', 'pole_distance', 'x0_equation', 'curvature',
            'euclidean_sphere', 'hyperplane_characteristic', 'group_law',
        }
        assert all(list(row) == REPORT_FIELDS for row in rows)

    def test_section_rows_drop_section_key(self):
        document, _ = discrepancy_report()
        for section_rows in document['sections'].values():
            for row in section_rows:
                assert 'section' not in row
