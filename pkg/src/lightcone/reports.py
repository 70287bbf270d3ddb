"""Canonical, byte-reproducible rendering of reports.

Floats use 17 significant digits ('%.17g', '.' decimal), JSON keys are
sorted, newlines are '\n'.  Same inputs always render the same bytes.
"""

from __future__ import annotations

import json
from typing import Iterable, Sequence

import numpy as np


def fmt_float(x: float) -> str:
    if x != x:
        raise ValueError("NaN is not representable in reports")
    return format(float(x), ".17g")


def _render(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt_float(float(obj))
    if isinstance(obj, dict):
        items = sorted(obj.items())
        return "{" + ",".join(f"{json.dumps(k)}:{_render(v)}"
                              for k, v in items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(_render(v) for v in obj) + "]"
    raise TypeError(f"cannot render {type(obj).__name__} in a report")


def canonical_json(obj) -> str:
    """Deterministic JSON document text (sorted keys, fixed floats)."""
    return _render(obj) + "\n"


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    """Deterministic CSV text; floats via fmt_float, '\n' line endings."""
    def cell(v) -> str:
        if isinstance(v, (bool, np.bool_)):
            return "1" if v else "0"
        if isinstance(v, (float, np.floating)):
            return fmt_float(float(v))
        if isinstance(v, (int, np.integer)):
            return str(int(v))
        return str(v)

    lines = [",".join(header)]
    lines.extend(",".join(cell(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"
