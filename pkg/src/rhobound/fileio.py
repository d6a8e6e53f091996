"""Reading and writing matrices in the text, CSV, and JSON formats.

Text format: optional comment lines starting with ``#``, one matrix row per
line, entries separated by whitespace or commas.  The dimension is inferred
and ragged rows are rejected.  CSV is the same format with commas.  JSON is
either a bare nested list or an object with an ``entries`` key.

Matrices are written with shortest round-trip float formatting, so a file
written by this module re-parses to bitwise-identical doubles.
"""
from __future__ import annotations

import json
from pathlib import Path

from .errors import MatrixParseError
from .matrix import Matrix

FORMATS = ("text", "csv", "json")


def parse_matrix_text(text: str) -> Matrix:
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        tokens = stripped.replace(",", " ").split()
        try:
            row = [float(tok) for tok in tokens]
        except ValueError as err:
            raise MatrixParseError(f"line {lineno}: {err}") from None
        rows.append(row)
    if not rows:
        raise MatrixParseError("no matrix rows found")
    width = len(rows[0])
    for lineno, row in enumerate(rows, start=1):
        if len(row) != width:
            raise MatrixParseError(
                f"ragged rows: row {lineno} has {len(row)} entries, expected {width}"
            )
    return Matrix(rows)


def parse_matrix_json(text: str) -> Matrix:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as err:
        raise MatrixParseError(f"invalid JSON: {err}") from None
    if isinstance(obj, dict):
        obj = obj.get("entries")
    if not isinstance(obj, list):
        raise MatrixParseError("JSON matrix must be a nested list or {'entries': [[...]]}")
    return Matrix(obj)


def infer_format(path) -> str:
    suffix = Path(path).suffix.lower()
    if suffix == ".json":
        return "json"
    if suffix == ".csv":
        return "csv"
    return "text"


def read_matrix(path, fmt: str | None = None) -> Matrix:
    fmt = fmt or infer_format(path)
    if fmt not in FORMATS:
        raise MatrixParseError(f"unknown format {fmt!r}, expected one of {FORMATS}")
    text = Path(path).read_text()
    if fmt == "json":
        return parse_matrix_json(text)
    return parse_matrix_text(text)


def format_matrix(m: Matrix) -> str:
    """Text rows with round-trip float formatting."""
    return "\n".join(" ".join(repr(float(v)) for v in row) for row in m.entries)


def write_matrix(m: Matrix, path) -> None:
    Path(path).write_text(format_matrix(m) + "\n")
