"""Result tables: CSV with a metadata header and 17-significant-digit floats."""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


@dataclass
class ResultTable:
    """A rectangular table whose every column is flagged certified or not."""

    columns: list[str]
    rows: list[list]
    certified: dict[str, bool]
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        missing = [c for c in self.columns if c not in self.certified]
        if missing:
            raise ValueError(f"columns without a certified flag: {missing}")
        for r in self.rows:
            if len(r) != len(self.columns):
                raise ValueError("table is not rectangular")
        self.metadata = {"version": __version__, **self.metadata}

    @classmethod
    def from_columns(cls, data: dict[str, np.ndarray], certified: dict[str, bool], metadata=None):
        cols = list(data)
        arrs = [np.atleast_1d(np.asarray(data[c])) for c in cols]
        rows = [list(vals) for vals in zip(*arrs)]
        return cls(cols, rows, certified, metadata or {})

    def column(self, name: str) -> np.ndarray:
        j = self.columns.index(name)
        return np.array([r[j] for r in self.rows], dtype=float)

    def to_csv(self) -> str:
        buf = io.StringIO()
        for key in sorted(self.metadata):
            buf.write(f"# {key}: {json.dumps(self.metadata[key], sort_keys=True)}\n")
        buf.write("# certified: " + ",".join(
            f"{c}={'yes' if self.certified[c] else 'no'}" for c in self.columns) + "\n")
        buf.write(",".join(self.columns) + "\n")
        for r in self.rows:
            buf.write(",".join(fmt(x) for x in r) + "\n")
        return buf.getvalue()

    def write(self, path: str | Path) -> None:
        p = Path(path)
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(self.to_csv(), encoding="utf-8")

    @classmethod
    def read_csv(cls, text: str) -> "ResultTable":
        meta, cert, header, rows = {}, {}, None, []
        for line in text.splitlines():
            if line.startswith("# certified: "):
                for item in line[len("# certified: "):].split(","):
                    k, v = item.split("=")
                    cert[k] = v == "yes"
            elif line.startswith("# "):
                k, v = line[2:].split(": ", 1)
                meta[k] = json.loads(v)
            elif header is None:
                header = line.split(",")
            elif line:
                rows.append([float(x) for x in line.split(",")])
        meta.pop("version", None)
        return cls(header or [], rows, cert, meta)
