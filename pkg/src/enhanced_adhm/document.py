"""JSON interchange for representations.

Document layout::

    {
      "dims": {"r": 1, "c": 3, "cp": 1},
      "field": "exact",
      "A": [[{"re": "0", "im": "0"}, ...], ...],
      ...
    }

Exact entries are ``{"re": "p/q", "im": "p/q"}`` with string fractions; float
entries are ``[re, im]`` number pairs.  Keys other than ``dims``, ``field`` and
the seven matrices are rejected, in particular ``G``.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

from .numkernel import EXACT, FLOAT, GaussQ, Matrix
from .numkernel.scalar import format_rational, parse_rational
from .rep import DimVector, EnhancedRep

MATRIX_KEYS = ("A", "B", "I", "J", "Ap", "Bp", "F")
TOP_KEYS = ("dims", "field") + MATRIX_KEYS


class DocumentError(ValueError):
    """Malformed representation document; the message names the field."""


def _shapes(d: DimVector) -> dict[str, tuple[int, int]]:
    return {"A": (d.c, d.c), "B": (d.c, d.c), "I": (d.c, d.r), "J": (d.r, d.c),
            "Ap": (d.cp, d.cp), "Bp": (d.cp, d.cp), "F": (d.c, d.cp)}


def _entry_to_json(x, field):
    if field == EXACT:
        return {"re": format_rational(x.re), "im": format_rational(x.im)}
    return [x.real, x.imag]


def to_document(x: EnhancedRep) -> dict:
    doc = {"dims": dict(x.dims._asdict()), "field": x.field}
    for key, m in x.matrices().items():
        doc[key] = [[_entry_to_json(e, x.field) for e in m.row(i)] for i in range(m.rows)]
    return doc


def dumps(x: EnhancedRep) -> str:
    return json.dumps(to_document(x), indent=2) + "\n"


def save(x: EnhancedRep, path) -> None:
    Path(path).write_text(dumps(x))


def _parse_entry(raw, field, where):
    if field == EXACT:
        if not isinstance(raw, dict) or set(raw) != {"re", "im"}:
            raise DocumentError(f"{where}: exact entry must be an object with keys 're' and 'im'")
        parts = []
        for k in ("re", "im"):
            if not isinstance(raw[k], str):
                raise DocumentError(f"{where}.{k}: expected a fraction string")
            try:
                parts.append(parse_rational(raw[k]))
            except ValueError as exc:
                raise DocumentError(f"{where}.{k}: {exc}") from None
        return GaussQ(*parts)
    if (not isinstance(raw, list) or len(raw) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in raw)):
        raise DocumentError(f"{where}: float entry must be a [re, im] pair of numbers")
    if not all(math.isfinite(v) for v in raw):
        raise DocumentError(f"{where}: non-finite float entry")
    return complex(raw[0], raw[1])


def _parse_matrix(raw, shape, field, key) -> Matrix:
    rows, cols = shape
    if not isinstance(raw, list) or len(raw) != rows:
        raise DocumentError(f"{key}: expected {rows} rows")
    entries = []
    for i, row in enumerate(raw):
        if not isinstance(row, list) or len(row) != cols:
            raise DocumentError(f"{key}[{i}]: expected {cols} entries")
        for j, e in enumerate(row):
            entries.append(_parse_entry(e, field, f"{key}[{i}][{j}]"))
    return Matrix(rows, cols, entries, field)


def from_document(doc) -> EnhancedRep:
    if not isinstance(doc, dict):
        raise DocumentError("top level: expected a JSON object")
    unknown = sorted(set(doc) - set(TOP_KEYS))
    if unknown:
        raise DocumentError(f"unknown key(s): {', '.join(unknown)}")
    missing = [k for k in TOP_KEYS if k not in doc]
    if missing:
        raise DocumentError(f"missing key(s): {', '.join(missing)}")
    dims_raw = doc["dims"]
    if not isinstance(dims_raw, dict) or set(dims_raw) != {"r", "c", "cp"}:
        raise DocumentError("dims: expected an object with keys r, c, cp")
    if not all(isinstance(v, int) and not isinstance(v, bool) for v in dims_raw.values()):
        raise DocumentError("dims: entries must be integers")
    try:
        dims = DimVector(dims_raw["r"], dims_raw["c"], dims_raw["cp"]).validate()
    except ValueError as exc:
        raise DocumentError(f"dims: {exc}") from None
    field = doc["field"]
    if field not in (EXACT, FLOAT):
        raise DocumentError(f"field: expected 'exact' or 'float', got {field!r}")
    shapes = _shapes(dims)
    mats = {k: _parse_matrix(doc[k], shapes[k], field, k) for k in MATRIX_KEYS}
    return EnhancedRep(**mats)


def loads(text: str) -> EnhancedRep:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return from_document(doc)


def load(path) -> EnhancedRep:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DocumentError(f"{path}: {exc.strerror}") from None
    return loads(text)
