"""Tensor files and scan CSVs.

Tensor file grammar (JSON text, UTF-8)::

    {
      "version": 1,
      "m": <int >= 1>,
      "dims": [n_1, ..., n_m, n_out],
      "field": "real" | "complex",
      "data": [...]
    }

``data`` is the flat row-major coefficient array, length prod(dims).  Real
tensors store plain numbers; complex tensors store ``[re, im]`` pairs.  Floats
are written with ``repr`` precision, so a save/load round trip is exact.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from hllab.errors import DomainError
from hllab.tensorlab import CoeffTensor

TENSOR_FORMAT_VERSION = 1
CSV_COLUMNS = ("kind", "n", "d", "trials", "seed", "norm_lb", "norm_exact", "mixed", "ratio")


def tensor_to_dict(A: CoeffTensor) -> dict:
    flat = A.data.reshape(-1)
    if A.field == "complex":
        data = [[float(z.real), float(z.imag)] for z in flat]
    else:
        data = [float(x) for x in flat]
    return {"version": TENSOR_FORMAT_VERSION, "m": A.m, "dims": list(A.dims), "field": A.field, "data": data}


def tensor_from_dict(doc: dict) -> CoeffTensor:
    try:
        version = doc["version"]
        m, dims, field, data = doc["m"], doc["dims"], doc["field"], doc["data"]
    except (KeyError, TypeError) as exc:
        raise DomainError(f"tensor file is missing field {exc}") from exc
    if version != TENSOR_FORMAT_VERSION:
        raise DomainError(f"unsupported tensor file version {version!r}")
    if not isinstance(m, int) or m < 1 or len(dims) != m + 1 or any(not isinstance(n, int) or n < 1 for n in dims):
        raise DomainError("tensor file: dims must list m+1 positive integers")
    if field not in ("real", "complex"):
        raise DomainError(f"tensor file: unknown field {field!r}")
    if len(data) != math.prod(dims):
        raise DomainError(f"tensor file: data has {len(data)} entries, dims need {math.prod(dims)}")
    if field == "complex":
        arr = np.array([complex(re, im) for re, im in data], dtype=np.complex128)
    else:
        arr = np.array(data, dtype=np.float64)
    return CoeffTensor(arr.reshape(dims), field)


def dumps_tensor(A: CoeffTensor) -> str:
    return json.dumps(tensor_to_dict(A)) + "\n"


def loads_tensor(text: str) -> CoeffTensor:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"tensor file is not valid JSON: {exc}") from exc
    return tensor_from_dict(doc)


def save_tensor(A: CoeffTensor, path) -> None:
    Path(path).write_text(dumps_tensor(A), encoding="utf-8")


def load_tensor(path) -> CoeffTensor:
    return loads_tensor(Path(path).read_text(encoding="utf-8"))


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def records_to_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in records:
        writer.writerow([_cell(getattr(rec, col)) for col in CSV_COLUMNS])
    return buf.getvalue()


def records_from_csv(text: str):
    from hllab.harness.scan import ScanRecord

    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
        raise DomainError(f"unexpected CSV header {reader.fieldnames}")
    out = []
    for row in reader:
        out.append(
            ScanRecord(
                kind=row["kind"],
                n=int(row["n"]),
                d=int(row["d"]) if row["d"] else None,
                trials=int(row["trials"]),
                seed=int(row["seed"]),
                norm_lb=float(row["norm_lb"]),
                norm_exact=row["norm_exact"] == "true",
                mixed=float(row["mixed"]),
                ratio=float(row["ratio"]),
            )
        )
    return out
