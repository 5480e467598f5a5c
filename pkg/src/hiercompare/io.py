"""Results files and JSON reports.

A results file is a CSV whose header is ``dataset,d1,...,dn`` and whose rows
hold one data set's fold accuracy differences in run-major order. An optional
first line ``# runs=<m> folds=<k>`` records the cross-validation layout.
"""
from __future__ import annotations

import csv
import json
import math
import re
from pathlib import Path
from typing import Optional

import numpy as np

from .exceptions import InputError, ParseError
from .model import CrossValMatrix

SCHEMA_VERSION = 1
_META = re.compile(r"#\s*runs\s*=\s*(\d+)\s+folds\s*=\s*(\d+)\s*$")


def _read_table(path, lower: float, upper: float):
    path = Path(path)
    if not path.exists():
        raise InputError(f"no such file: {path}")
    meta = (None, None)
    names, rows = [], []
    with path.open(newline="") as fh:
        lines = fh.read().splitlines()
    line_no = 0
    if lines and lines[0].lstrip().startswith("#"):
        m = _META.match(lines[0].strip())
        if m is None:
            raise ParseError("metadata line must read '# runs=<m> folds=<k>'", row=1)
        meta = (int(m.group(1)), int(m.group(2)))
        line_no = 1
    reader = csv.reader(lines[line_no:])
    header = next(reader, None)
    if not header or header[0].strip() != "dataset" or len(header) < 2:
        raise ParseError("header must start with 'dataset' followed by fold columns", row=line_no + 1)
    width = len(header)
    seen = set()
    for offset, rec in enumerate(reader, start=line_no + 2):
        if not rec or all(not c.strip() for c in rec):
            continue
        if len(rec) != width:
            raise ParseError(f"expected {width} cells, found {len(rec)}", row=offset)
        name = rec[0].strip()
        if name in seen:
            raise ParseError(f"duplicate data set id {name!r}", row=offset, column=1)
        seen.add(name)
        vals = []
        for col, cell in enumerate(rec[1:], start=2):
            try:
                v = float(cell)
            except ValueError:
                raise ParseError(f"cannot parse {cell!r} as a number", row=offset, column=col) from None
            if not (math.isfinite(v) and lower <= v <= upper):
                raise ParseError(f"value {cell.strip()} outside [{lower:g}, {upper:g}]", row=offset, column=col)
            vals.append(v)
        names.append(name)
        rows.append(vals)
    if not rows:
        raise ParseError("file contains no data rows")
    return names, np.array(rows), meta


def _layout(n: int, runs: Optional[int], folds: Optional[int], meta):
    runs = runs if runs is not None else meta[0]
    folds = folds if folds is not None else meta[1]
    if folds is None and runs is None:
        folds = 10
    if folds is None:
        folds = n // runs if runs and n % runs == 0 else None
    if runs is None:
        runs = n // folds if folds and n % folds == 0 else None
    if runs is None or folds is None or runs * folds != n:
        raise InputError(f"{n} fold columns do not match runs={runs} x folds={folds}")
    return runs, folds


def parse_results(path, runs: Optional[int] = None, folds: Optional[int] = None) -> CrossValMatrix:
    """Read and validate a results file.

    ``runs`` and ``folds`` override the metadata line; without either, 10 folds
    are assumed.
    """
    names, diffs, meta = _read_table(path, -1.0, 1.0)
    m, k = _layout(diffs.shape[1], runs, folds, meta)
    return CrossValMatrix(diffs, m, k, tuple(names))


def parse_score_pair(path_a, path_b, runs: Optional[int] = None, folds: Optional[int] = None) -> CrossValMatrix:
    """Fold scores of two classifiers on the same folds, returned as ``a - b``."""
    names_a, a, meta_a = _read_table(path_a, 0.0, 1.0)
    names_b, b, meta_b = _read_table(path_b, 0.0, 1.0)
    if names_a != names_b or a.shape != b.shape:
        raise InputError("score files must list the same data sets with the same number of folds")
    m, k = _layout(a.shape[1], runs, folds, meta_a if meta_a != (None, None) else meta_b)
    return CrossValMatrix(a - b, m, k, tuple(names_a))


def write_results(data: CrossValMatrix, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(f"# runs={data.runs} folds={data.folds}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["dataset"] + [f"d{j + 1}" for j in range(data.n)])
        for name, row in zip(data.names, data.diffs):
            w.writerow([name] + [repr(float(v)) for v in row])


def _encode(obj):
    if isinstance(obj, dict):
        return {k: _encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_encode(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _encode(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        if math.isnan(v):
            return None
        if math.isinf(v):
            return "Infinity" if v > 0 else "-Infinity"
        return v
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _decode(obj):
    if isinstance(obj, dict):
        return {k: _decode(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_decode(v) for v in obj]
    if obj == "Infinity":
        return math.inf
    if obj == "-Infinity":
        return -math.inf
    return obj


def dumps_report(report: dict) -> str:
    """Serialize a report as strict JSON; infinities become strings."""
    return json.dumps(_encode(report), indent=2, allow_nan=False) + "\n"


def loads_report(text: str) -> dict:
    return _decode(json.loads(text))
