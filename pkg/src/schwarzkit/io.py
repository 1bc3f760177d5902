"""Vector files.

JSON::

    {"dim": 2, "vectors": [[[1, 0], [0, 0]], [[0, 1], [2.5, -1]]]}

CSV, one vector per row after a header naming the real and imaginary
part of every coordinate::

    re0,im0,re1,im1
    1,0,0,0
    0,1,2.5,-1
"""

from __future__ import annotations

import csv
import io as _io
import json
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .core import CVector
from .errors import FormatError
from .reports import dumps, fmt17


class VectorFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


@dataclass(frozen=True)
class VectorFile:
    format: VectorFormat
    dim: int
    vectors: tuple[CVector, ...]

    def __len__(self) -> int:
        return len(self.vectors)


def infer_format(path, hint=None) -> VectorFormat:
    if hint is not None:
        return VectorFormat(hint)
    suffix = Path(path).suffix.lower()
    if suffix == ".json":
        return VectorFormat.JSON
    if suffix == ".csv":
        return VectorFormat.CSV
    raise FormatError(f"cannot tell the format from extension {suffix!r}; use .json or .csv", str(path))


def _number(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise FormatError(f"expected a number, got {json.dumps(value)}", where)
    value = float(value)
    if not math.isfinite(value):
        raise FormatError("number is not finite", where)
    return value


def parse_json_text(text: str) -> VectorFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None
    if not isinstance(doc, dict):
        raise FormatError("expected an object with 'dim' and 'vectors'", "top level")
    dim = doc.get("dim")
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise FormatError("'dim' must be a positive integer", "dim")
    rows = doc.get("vectors")
    if not isinstance(rows, list):
        raise FormatError("'vectors' must be a list", "vectors")
    vectors = []
    for i, row in enumerate(rows):
        where = f"vectors[{i}]"
        if not isinstance(row, list):
            raise FormatError("expected a list of [re, im] pairs", where)
        if len(row) != dim:
            raise FormatError(f"has {len(row)} entries, dim is {dim}", where)
        entries = []
        for k, pair in enumerate(row):
            at = f"{where}[{k}]"
            if not isinstance(pair, list) or len(pair) != 2:
                raise FormatError("expected a [re, im] pair", at)
            entries.append(complex(_number(pair[0], at), _number(pair[1], at)))
        vectors.append(CVector(entries))
    return VectorFile(VectorFormat.JSON, dim, tuple(vectors))


def csv_header(dim: int) -> list[str]:
    return [f"{part}{k}" for k in range(dim) for part in ("re", "im")]


def parse_csv_text(text: str) -> VectorFile:
    reader = csv.reader(_io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise FormatError("empty file; expected a header re0,im0,...", "line 1") from None
    header = [h.strip() for h in header]
    dim = len(header) // 2
    if dim < 1 or header != csv_header(dim):
        raise FormatError("header must read re0,im0,re1,im1,...", "line 1")
    vectors = []
    for row in reader:
        line = reader.line_num
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 2 * dim:
            raise FormatError(f"row has {len(row)} fields, header has {2 * dim}", f"line {line}")
        parts = []
        for col, cell in enumerate(row, start=1):
            try:
                value = float(cell)
            except ValueError:
                raise FormatError(f"malformed number {cell.strip()!r}", f"line {line}, field {col}") from None
            if not math.isfinite(value):
                raise FormatError("number is not finite", f"line {line}, field {col}")
            parts.append(value)
        vectors.append(CVector([complex(parts[2 * k], parts[2 * k + 1]) for k in range(dim)]))
    return VectorFile(VectorFormat.CSV, dim, tuple(vectors))


def parse_text(text: str, fmt) -> VectorFile:
    fmt = VectorFormat(fmt)
    return parse_json_text(text) if fmt is VectorFormat.JSON else parse_csv_text(text)


def parse_vectors(path, fmt=None) -> VectorFile:
    """Read a vector file; the format comes from ``fmt`` or else the extension."""
    fmt = infer_format(path, fmt)
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise FormatError(f"not UTF-8 text ({exc.reason})", f"byte {exc.start}") from None
    return parse_text(text, fmt)


def format_vectors(vectors, fmt, dim: int | None = None) -> str:
    vectors = list(vectors)
    if dim is None:
        if not vectors:
            raise ValueError("dim is needed to write an empty vector list")
        dim = vectors[0].dim
    if any(v.dim != dim for v in vectors):
        raise FormatError(f"all vectors must have dimension {dim}")
    fmt = VectorFormat(fmt)
    if fmt is VectorFormat.JSON:
        rows = [[[z.real, z.imag] for z in v.entries] for v in vectors]
        return dumps({"dim": dim, "vectors": rows}) + "\n"
    lines = [",".join(csv_header(dim))]
    for v in vectors:
        lines.append(",".join(fmt17(part) for z in v.entries for part in (z.real, z.imag)))
    return "\n".join(lines) + "\n"


def write_vectors(path, vectors, fmt=None, dim: int | None = None) -> None:
    Path(path).write_text(format_vectors(vectors, infer_format(path, fmt), dim), encoding="utf-8")
