"""CSV/JSON writers for tabular results.

Floats are written with 17 significant digits in CSV and as shortest
round-trip reprs in JSON; both reparse to the identical double. Missing
values (NaN) become empty CSV fields / JSON ``null``.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path
from typing import Any, Sequence


def _cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return "" if math.isnan(v) else format(v, ".17g")
    return str(v)


def _json_value(v: Any) -> Any:
    if isinstance(v, float) and math.isnan(v):
        return None
    if isinstance(v, complex):
        return [v.real, v.imag]
    if hasattr(v, "item"):  # numpy scalar
        return _json_value(v.item())
    return v


def render_csv(columns: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def render_json(command: str, meta: dict, columns: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    doc = {
        "command": command,
        "meta": {k: _json_value(v) for k, v in meta.items()},
        "columns": list(columns),
        "rows": [[_json_value(v) for v in row] for row in rows],
    }
    return json.dumps(doc, allow_nan=False) + "\n"


def write_atomic(path: str | os.PathLike, text: str) -> None:
    """Write via a temp file in the target directory, then rename over ``path``."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_table(path: str | os.PathLike) -> tuple[list[str], list[list[Any]], dict]:
    """Parse a file written by :func:`render_csv` / :func:`render_json`.

    Returns ``(columns, rows, meta)``; CSV files carry no metadata.
    """
    text = Path(path).read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        doc = json.loads(text)
        rows = [[float("nan") if v is None else v for v in row] for row in doc["rows"]]
        return doc["columns"], rows, doc["meta"]
    reader = csv.reader(io.StringIO(text))
    columns = next(reader)
    rows = [[float(v) if v else float("nan") for v in row] for row in reader]
    return columns, rows, {}
