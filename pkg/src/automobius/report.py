"""Tabular experiment output with CSV and JSON writers."""
from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass, field


def _cell(v):
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        return repr(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return ""
    return str(v)


def _jsonable(v):
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if hasattr(v, "item"):
        return v.item()
    return v


@dataclass
class Report:
    name: str
    columns: list
    rows: list
    meta: dict = field(default_factory=dict)

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([_cell(v) for v in row])
        return buf.getvalue()

    def to_json(self):
        payload = {
            "experiment": self.name,
            "meta": _jsonable(self.meta),
            "columns": self.columns,
            "rows": [_jsonable(list(r)) for r in self.rows],
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    def render(self, fmt):
        return self.to_json() if fmt == "json" else self.to_csv()

    def write(self, path, fmt="csv"):
        """Atomic write: temp file in the target directory, then rename."""
        text = self.render(fmt)
        tmp = f"{path}.tmp{os.getpid()}"
        with open(tmp, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
