"""Result documents and their CSV / JSON serialization.

A :class:`ResultDocument` holds a metadata block, a dict of final scalars and
any number of column tables (iteration log, solution curve, Gamma profile,
...). JSON stores the whole document in one file and round-trips exactly
(floats are written with ``repr``, the shortest string that reads back to the
same double). CSV writes one file per table; its first line is a ``#``
comment carrying the metadata and final scalars as JSON, and numbers use 17
significant digits.
"""

from __future__ import annotations

import csv
import datetime as _dt
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__

__all__ = [
    "ResultDocument",
    "iteration_table",
    "read_csv_table",
    "read_results",
    "solution_table",
    "write_results",
]

ITERATION_COLUMNS = ("j", "h_star", "lambda", "gamma", "skin_friction", "status")
SOLUTION_COLUMNS = ("eta", "f", "fprime", "fsecond")


def _plain(value):
    """Convert numpy scalars/arrays and tuples to JSON-native values."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_plain(v) for v in value]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if hasattr(value, "value") and not isinstance(value, (int, float, str, bool)):
        return value.value  # enums
    return value


@dataclass
class ResultDocument:
    command: str
    metadata: dict = field(default_factory=dict)
    final: dict = field(default_factory=dict)
    tables: dict[str, dict[str, list]] = field(default_factory=dict)

    def __post_init__(self):
        self.metadata = _plain(self.metadata)
        self.final = _plain(self.final)
        self.tables = {name: {c: _plain(v) for c, v in cols.items()} for name, cols in self.tables.items()}
        for name, cols in self.tables.items():
            lengths = {len(v) for v in cols.values()}
            if len(lengths) > 1:
                raise ValueError(f"table {name!r} has columns of unequal length {sorted(lengths)}")

    @classmethod
    def create(cls, command: str, config: dict, **kwargs) -> ResultDocument:
        meta = {
            "config": config,
            "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
            "version": __version__,
        }
        return cls(command, meta, **kwargs)

    def to_dict(self) -> dict:
        return {"command": self.command, "metadata": self.metadata, "final": self.final, "tables": self.tables}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, allow_nan=True)

    @classmethod
    def from_dict(cls, data: dict) -> ResultDocument:
        return cls(data["command"], data.get("metadata", {}), data.get("final", {}), data.get("tables", {}))

    def __eq__(self, other):
        # NaN entries (failed probes) must compare equal to themselves
        if not isinstance(other, ResultDocument):
            return NotImplemented
        return self.to_json() == other.to_json()


def iteration_table(records) -> dict[str, list]:
    return {
        "j": [r.index for r in records],
        "h_star": [r.h_star for r in records],
        "lambda": [r.lam for r in records],
        "gamma": [r.gamma for r in records],
        "skin_friction": [r.skin_friction for r in records],
        "status": [r.status.value for r in records],
    }


def solution_table(trajectory) -> dict[str, list]:
    s = trajectory.states
    return {"eta": trajectory.nodes, "f": s[:, 0], "fprime": s[:, 1], "fsecond": s[:, 2]}


def _fmt(value) -> str:
    if isinstance(value, bool) or value is None:
        return str(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return "%.17g" % value
    return str(value)


def _csv_paths(path: Path, tables) -> dict[str, Path]:
    base = path.with_suffix("") if path.suffix == ".csv" else path
    return {name: base.parent / f"{base.name}_{name}.csv" for name in tables}


def write_results(doc: ResultDocument, fmt: str, path) -> list[Path]:
    """Write ``doc`` as ``"json"`` (one file) or ``"csv"`` (one file per table).

    Returns the paths written. A document without tables still produces one
    CSV file, ``<path>_final.csv``, holding the scalars.
    """
    path = Path(path)
    fmt = fmt.lower()
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        if fmt == "json":
            target = path if path.suffix == ".json" else path.with_name(path.name + ".json")
            target.write_text(doc.to_json() + "\n")
            return [target]
        if fmt != "csv":
            raise ValueError(f"unknown format {fmt!r} (expected csv or json)")
        header = "# " + json.dumps({"command": doc.command, "metadata": doc.metadata, "final": doc.final}, allow_nan=True)
        tables = doc.tables or {"final": {k: [v] for k, v in doc.final.items()}}
        written = []
        for name, target in _csv_paths(path, tables).items():
            cols = tables[name]
            with target.open("w", newline="") as fh:
                fh.write(header + "\n")
                writer = csv.writer(fh)
                writer.writerow(cols.keys())
                for row in zip(*cols.values()):
                    writer.writerow(_fmt(v) for v in row)
            written.append(target)
        return written
    except OSError as err:
        raise OSError(f"cannot write results to {path}: {err.strerror or err}") from err


def read_results(path) -> ResultDocument:
    path = Path(path)
    try:
        return ResultDocument.from_dict(json.loads(path.read_text()))
    except OSError as err:
        raise OSError(f"cannot read results from {path}: {err.strerror or err}") from err


def _parse_cell(text: str):
    if text in ("True", "False"):
        return text == "True"
    if text == "None":
        return None
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def read_csv_table(path) -> tuple[dict, dict[str, list]]:
    """``(header, columns)`` of a CSV table written by :func:`write_results`."""
    with Path(path).open(newline="") as fh:
        first = fh.readline()
        header = json.loads(first[1:]) if first.startswith("#") else {}
        reader = csv.reader(fh)
        names = next(reader)
        cols: dict[str, list] = {n: [] for n in names}
        for row in reader:
            for n, cell in zip(names, row):
                cols[n].append(_parse_cell(cell))
    return header, cols
