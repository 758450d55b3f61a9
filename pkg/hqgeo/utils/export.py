"""
CSV and JSON artifacts.

Every artifact is checked for non-finite numbers before anything is written,
and files are replaced atomically.
"""
import csv
import io
import json
import logging
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from hqgeo.group.frame import theta_array
from hqgeo.paths.curve import SampledCurve
from hqgeo.utils.exceptions import EvaluationError


logger = logging.getLogger(__name__)

SCHEMA = 'hqgeo/1'
CURVE_FIELDS = ['lambda', 'x1', 'x2', 'x3', 'x4', 't1', 't2', 't3',
                'theta1', 'theta2', 'theta3', 'res_horizontality']
POINT_FIELDS = ['x1', 'x2', 'x3', 'x4', 't1', 't2', 't3']


@dataclass
class Artifact:
    """Result of a subcommand: tabular rows for CSV and a document for JSON."""
    command: str
    rows: List[Dict[str, Any]] = field(default_factory=list)
    fieldnames: List[str] = field(default_factory=list)
    document: Dict[str, Any] = field(default_factory=dict)

    def json_document(self) -> Dict[str, Any]:
        doc = {'command': self.command}
        if self.document:
            doc.update(self.document)
        else:
            doc['rows'] = self.rows
        doc['schema'] = SCHEMA
        return doc


def to_plain(value: Any) -> Any:
    """Convert numpy scalars and arrays to JSON-compatible Python values."""
    if isinstance(value, dict):
        return {str(k): to_plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_plain(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    return value


def ensure_finite(value: Any, path: str = '$'):
    """
    Raises:
        EvaluationError: If any number inside value is NaN or infinite
    """
    if isinstance(value, dict):
        for k, v in value.items():
            ensure_finite(v, f"{path}.{k}")
    elif isinstance(value, (list, tuple)):
        for i, v in enumerate(value):
            ensure_finite(v, f"{path}[{i}]")
    elif isinstance(value, float) and not math.isfinite(value):
        raise EvaluationError(f"Non-finite value at {path}", context={'operation': 'export', 'params': {'path': path}})


def json_text(artifact: Artifact) -> str:
    doc = to_plain(artifact.json_document())
    ensure_finite(doc)
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + '\n'


def csv_text(artifact: Artifact) -> str:
    rows = to_plain(artifact.rows)
    ensure_finite(rows)
    fieldnames = artifact.fieldnames or (list(rows[0].keys()) if rows else [])
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=fieldnames, lineterminator='\n')
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buffer.getvalue()


def render(artifact: Artifact, output_format: str) -> str:
    return json_text(artifact) if output_format == 'json' else csv_text(artifact)


def write_atomic(text: str, path: str):
    """Write text to a temporary file next to path, then move it into place."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix='.hqgeo-', suffix='.tmp')
    try:
        with os.fdopen(fd, 'w', encoding='utf-8', newline='') as f:
            f.write(text)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise
    logger.debug(f"Wrote {path}")


def emit(artifact: Artifact, output_format: str, output_path: Optional[str] = None):
    """Render the artifact and write it to output_path, or to standard output."""
    text = render(artifact, output_format)
    if output_path:
        write_atomic(text, output_path)
    else:
        sys.stdout.write(text)


def point_row(coords: Sequence[float], **extra) -> Dict[str, Any]:
    row = dict(zip(POINT_FIELDS, (float(c) for c in coords)))
    row.update(extra)
    return row


def curve_rows(curve: SampledCurve) -> List[Dict[str, Any]]:
    """
    One row per sample with contact forms and the horizontality residual.

    Raises:
        EvaluationError: If the curve has no velocities
    """
    if curve.velocities is None:
        raise EvaluationError("Curve export needs velocities", context={'operation': 'curve_rows'})
    theta = theta_array(curve.points, curve.velocities)
    residual = np.linalg.norm(theta, axis=-1)
    rows = []
    for k, lam in enumerate(curve.lam):
        row = {'lambda': float(lam)}
        row.update(point_row(curve.points[k]))
        row.update({'theta1': float(theta[k, 0]), 'theta2': float(theta[k, 1]), 'theta3': float(theta[k, 2]),
                    'res_horizontality': float(residual[k])})
        rows.append(row)
    return rows
