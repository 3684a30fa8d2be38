"""CSV ingestion and report serialization.

JSON report layout::

    {
      "method": "svd" | "taxicab",
      "index_kind": "...",
      "shape": [I, J],
      "residual_norm": float,
      "dispersions": [{"axis": 1, "delta": .., "delta2": .., "percent": ..}, ...],
      "rows":    [{"label": "..", "coordinates": [f_1(i), f_2(i), ...]}, ...],
      "columns": [{"label": "..", "coordinates": [g_1(j), ...]}, ...]
    }

Floats are written with ``repr`` so they round-trip exactly. The CSV format
writes the same three blocks to ``dispersions.csv``, ``rows.csv`` and
``columns.csv``.
"""

from __future__ import annotations

import csv
import json
import os
from pathlib import Path

import numpy as np

from .errors import NegativeEntry, ParseError
from .tables import ContingencyTable, Decomposition


def _parse_float(text, line, col):
    try:
        return float(text)
    except ValueError:
        raise ParseError(f"not a number: {text!r}", line, col) from None


def read_table(path, has_row_labels=None, has_header=None) -> ContingencyTable:
    """Read a comma-delimited UTF-8 table.

    With ``has_header`` / ``has_row_labels`` left as None, a first line or
    first column is treated as labels when it does not parse as numbers.
    """
    with open(path, newline="", encoding="utf-8-sig") as fh:
        records = [(n, r) for n, r in enumerate(csv.reader(fh), start=1) if r and any(c.strip() for c in r)]
    if not records:
        raise ParseError(f"{path}: empty file")

    def numeric(cells):
        try:
            [float(c) for c in cells]
            return True
        except ValueError:
            return False

    if has_header is None:
        first = records[0][1]
        has_header = not numeric(first[1:])
    header = None
    if has_header:
        header = [c.strip() for c in records[0][1]]
        records = records[1:]
    if not records:
        raise ParseError(f"{path}: no data rows")
    if has_row_labels is None:
        has_row_labels = not all(numeric(r[:1]) for _, r in records)

    width = len(records[0][1])
    labels, body = [], []
    for line, row in records:
        if len(row) != width:
            raise ParseError(f"expected {width} fields, found {len(row)}", line)
        cells = row[1:] if has_row_labels else row
        if has_row_labels:
            labels.append(row[0].strip())
        off = 2 if has_row_labels else 1
        values = [_parse_float(c.strip(), line, k + off) for k, c in enumerate(cells)]
        body.append(values)
    values = np.array(body, dtype=np.float64)
    if np.any(values < 0):
        i, j = np.argwhere(values < 0)[0]
        raise NegativeEntry(int(i), int(j))

    col_labels = None
    if header is not None:
        col_labels = header[1:] if has_row_labels else header
        if len(col_labels) != values.shape[1]:
            # header without a corner cell
            if len(header) == values.shape[1]:
                col_labels = header
            else:
                raise ParseError("header width does not match the data", 1)
    return ContingencyTable(values, labels or None, col_labels)


def _num(x) -> str:
    return repr(float(x))


def write_table(table: ContingencyTable, path) -> None:
    """Write a labeled table as CSV to a path or an open text stream."""
    if hasattr(path, "write"):
        _write_rows(table, path)
        return
    with open(path, "w", newline="", encoding="utf-8") as fh:
        _write_rows(table, fh)


def _write_rows(table, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow([""] + list(table.col_labels))
    for label, row in zip(table.row_labels, table.values):
        w.writerow([label] + [_fmt_cell(x) for x in row])


def _fmt_cell(x) -> str:
    x = float(x)
    return str(int(x)) if x.is_integer() and abs(x) < 2**53 else repr(x)


def decomposition_dict(d: Decomposition) -> dict:
    t = d.source
    pct = d.percentages()
    F, G = d.row_coordinates, d.col_coordinates
    return {
        "method": d.method,
        "index_kind": d.index_kind,
        "shape": list(t.shape),
        "residual_norm": float(d.residual_norm),
        "dispersions": [
            {
                "axis": k + 1,
                "delta": float(ax.delta),
                "delta2": float(ax.delta) ** 2,
                "percent": float(pct[k]),
            }
            for k, ax in enumerate(d.axes)
        ],
        "rows": [
            {"label": lab, "coordinates": [float(x) for x in F[i]]}
            for i, lab in enumerate(t.row_labels)
        ],
        "columns": [
            {"label": lab, "coordinates": [float(x) for x in G[j]]}
            for j, lab in enumerate(t.col_labels)
        ],
    }


def write_decomposition(d: Decomposition, fmt: str, path) -> list:
    """Write a report; ``path`` is a file for JSON and a directory for CSV.

    Returns the list of files written.
    """
    path = Path(path)
    if fmt == "json":
        if path.parent and not path.parent.exists():
            path.parent.mkdir(parents=True)
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(decomposition_dict(d), fh, indent=2)
            fh.write("\n")
        return [path]
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    os.makedirs(path, exist_ok=True)
    rep = decomposition_dict(d)
    k = len(d.axes)
    out = []
    disp = path / "dispersions.csv"
    with open(disp, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["axis", "delta", "delta2", "percent"])
        for row in rep["dispersions"]:
            w.writerow([row["axis"], _num(row["delta"]), _num(row["delta2"]), _num(row["percent"])])
    out.append(disp)
    for block, name in (("rows", "rows.csv"), ("columns", "columns.csv")):
        fname = path / name
        with open(fname, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["label"] + [f"axis{a + 1}" for a in range(k)])
            for item in rep[block]:
                w.writerow([item["label"]] + [_num(x) for x in item["coordinates"]])
        out.append(fname)
    return out
