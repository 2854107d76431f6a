"""Matrix and result files.

Binary matrix layout (little endian): the 8 bytes ``SUBSELv1``, rows and
cols as uint64, then rows*cols float64 values in row-major order.
"""

import csv
import json
import math
import struct
from pathlib import Path

import numpy as np

from .linalg import as_data_matrix
from .selection import SelectionResult

MAGIC = b"SUBSELv1"
_HEADER = struct.Struct("<8sQQ")
RESULT_SCHEMA = 1


class FormatError(ValueError):
    pass


def read_csv(path, has_header=False):
    rows = []
    width = None
    with open(path, newline="") as fh:
        for lineno, record in enumerate(csv.reader(fh), start=1):
            if lineno == 1 and has_header:
                continue
            if not record or all(not c.strip() for c in record):
                continue
            if width is None:
                width = len(record)
            elif len(record) != width:
                raise FormatError(
                    f"{path}: line {lineno}: expected {width} values, got {len(record)}"
                )
            row = []
            for col, cell in enumerate(record, start=1):
                try:
                    x = float(cell)
                except ValueError:
                    raise FormatError(
                        f"{path}: line {lineno}, column {col}: cannot parse {cell.strip()!r}"
                    ) from None
                if not math.isfinite(x):
                    raise FormatError(f"{path}: line {lineno}, column {col}: non-finite value")
                row.append(x)
            rows.append(row)
    if not rows:
        raise FormatError(f"{path}: no data rows")
    return as_data_matrix(np.array(rows))


def write_csv(A, path, header=None):
    A = np.asarray(A, dtype=np.float64)
    with open(path, "w", newline="") as fh:
        if header:
            fh.write(",".join(header) + "\n")
        for row in np.atleast_2d(A):
            fh.write(",".join(repr(float(x)) for x in row) + "\n")


def write_binary(A, path):
    A = as_data_matrix(A)
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, A.shape[0], A.shape[1]))
        fh.write(A.astype("<f8").tobytes(order="C"))


def read_binary(path):
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise FormatError(f"{path}: file too short for header")
    magic, rows, cols = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r}")
    expected = rows * cols * 8
    payload = data[_HEADER.size:]
    if len(payload) != expected:
        raise FormatError(f"{path}: payload has {len(payload)} bytes, expected {expected}")
    A = np.frombuffer(payload, dtype="<f8").reshape(rows, cols).astype(np.float64)
    return as_data_matrix(A)


def read_matrix(path, has_header=False):
    """Dispatch on extension: ``.csv``/``.txt`` as CSV, anything else binary."""
    if Path(path).suffix.lower() in (".csv", ".txt"):
        return read_csv(path, has_header=has_header)
    return read_binary(path)


def write_matrix(A, path):
    if Path(path).suffix.lower() in (".csv", ".txt"):
        write_csv(A, path)
    else:
        write_binary(A, path)


def result_to_dict(result):
    return {
        "schema": RESULT_SCHEMA,
        "method": result.method,
        "indices": [int(i) for i in result.indices],
        "sigmas": [float(s) for s in result.sigmas],
        "residual_energies": [float(e) for e in result.residual_energies],
        "elapsed_seconds": float(result.elapsed),
        "parameters": result.params,
        "info": result.info,
    }


def result_from_dict(d):
    if d.get("schema") != RESULT_SCHEMA:
        raise FormatError(f"unsupported result schema {d.get('schema')!r}")
    return SelectionResult(
        indices=list(d["indices"]),
        sigmas=list(d.get("sigmas", [])),
        residual_energies=list(d.get("residual_energies", [])),
        elapsed=float(d.get("elapsed_seconds", 0.0)),
        method=d.get("method", ""),
        params=dict(d.get("parameters", {})),
        info=dict(d.get("info", {})),
    )


def dumps_result(result):
    return json.dumps(result_to_dict(result), indent=2, sort_keys=True) + "\n"


def write_result(result, path):
    Path(path).write_text(dumps_result(result))


def read_result(path):
    return result_from_dict(json.loads(Path(path).read_text()))
