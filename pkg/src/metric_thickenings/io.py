"""Reading spaces, measures and complexes from files."""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .errors import InputError
from .measure import FiniteMeasure
from .metric_space import MetricSpace, from_points, validate
from .simplicial_complex import SimplicialComplex


def _number(token: str, line: int, column: int) -> float:
    token = token.strip()
    if token.lower() in ("inf", "+inf", "infinity"):
        return math.inf
    try:
        value = float(token)
    except ValueError:
        raise InputError(f"expected a number, got {token!r}", line, column) from None
    if math.isnan(value):
        raise InputError("NaN is not a distance", line, column)
    return value


def _rows(text: str) -> list[tuple[int, list[str]]]:
    out = []
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or all(not c.strip() for c in row) or row[0].lstrip().startswith("#"):
            continue
        out.append((lineno, [c.strip() for c in row]))
    return out


def parse_distance_csv(text: str) -> MetricSpace:
    """Header of point labels, then one row per point: label followed by distances.

    The header may carry a leading blank cell above the label column.  The
    token ``inf`` denotes an infinite distance.
    """
    rows = _rows(text)
    if not rows:
        raise InputError("empty distance matrix")
    (_, header), body = rows[0], rows[1:]
    if len(header) == len(body) + 1 and header[0] == "":
        header = header[1:]
    n = len(header)
    if len(body) != n:
        raise InputError(f"header names {n} points but there are {len(body)} rows", rows[0][0])
    dist = np.zeros((n, n))
    for i, (lineno, row) in enumerate(body):
        if len(row) != n + 1:
            raise InputError(f"expected a label and {n} distances, got {len(row)} fields", lineno)
        if row[0] != header[i]:
            raise InputError(f"row label {row[0]!r} does not match header {header[i]!r}", lineno, 1)
        for j, token in enumerate(row[1:]):
            dist[i, j] = _number(token, lineno, j + 2)
    space = MetricSpace(tuple(header), dist)
    problems = validate(space)
    if problems:
        raise InputError(f"not an extended pseudo-metric: {problems[0]}")
    return space


def parse_points_csv(text: str, metric: str = "l2") -> MetricSpace:
    rows = _rows(text)
    if not rows:
        raise InputError("empty point cloud")
    labels, coords = [], []
    width = None
    for lineno, row in rows:
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise InputError(f"expected {width} fields, got {len(row)}", lineno)
        labels.append(row[0])
        coords.append([_number(t, lineno, j + 2) for j, t in enumerate(row[1:])])
    if len(set(labels)) != len(labels):
        raise InputError("duplicate point labels")
    return from_points(labels, np.array(coords, dtype=float).reshape(len(labels), -1), metric)


def read_space(path: str | Path, metric: str | None = None) -> MetricSpace:
    """Distance-matrix CSV, or a point-cloud CSV when ``metric`` is given."""
    text = Path(path).read_text(encoding="utf-8")
    if metric is None:
        return parse_distance_csv(text)
    return parse_points_csv(text, metric)


def write_distance_csv(space: MetricSpace) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(space.points)
    for p, row in zip(space.points, space.dist):
        writer.writerow([p] + ["inf" if math.isinf(v) else repr(float(v)) for v in row])
    return buf.getvalue()


def read_measure(path: str | Path, space: MetricSpace) -> FiniteMeasure:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    try:
        return FiniteMeasure.from_json(space, data)
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed measure: missing {exc}") from None


def read_complex(path: str | Path) -> SimplicialComplex:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    return SimplicialComplex.from_json(data)
