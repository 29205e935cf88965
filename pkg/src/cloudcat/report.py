"""Machine-readable benchmark reports (JSON document + CSV flattening).

A report is fully reproducible from its embedded config echo: every trial
record carries the seed it was generated with, and the aggregate rows are
recomputable from the per-trial records via ``aggregate_records``.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

SCHEMA_VERSION = 1

_CSV_COLUMNS = ("method", "kind", "level", "metric", "value", "seed")


@dataclass(frozen=True)
class TrialRecord:
    method: str
    kind: str
    level: float
    metric: str
    value: float
    seed: int


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def aggregate_records(records) -> list:
    """Mean/max/count per (method, kind, level, metric) group, in first-seen order."""
    groups: dict = {}
    for r in records:
        groups.setdefault((r.method, r.kind, r.level, r.metric), []).append(r.value)
    rows = []
    for (method, kind, level, metric), values in groups.items():
        rows.append(
            {
                "method": method,
                "kind": kind,
                "level": level,
                "metric": metric,
                "mean": float(np.mean(values)),
                "max": float(np.max(values)),
                "count": len(values),
            }
        )
    return rows


@dataclass
class BenchReport:
    command: str
    config: dict
    records: list = field(default_factory=list)
    tool: str = "cloudcat"
    version: str = "0.1.0"
    schema_version: int = SCHEMA_VERSION

    def add(self, method: str, kind: str, level, metric: str, value, seed: int):
        self.records.append(
            TrialRecord(
                method=method,
                kind=kind,
                level=float(level),
                metric=metric,
                value=float(value),
                seed=int(seed),
            )
        )

    def values(self, **filters) -> np.ndarray:
        """Record values matching all given field filters."""
        out = [
            r.value
            for r in self.records
            if all(getattr(r, k) == v for k, v in filters.items())
        ]
        return np.array(out)

    def to_dict(self) -> dict:
        return {
            "tool": self.tool,
            "version": self.version,
            "schema_version": self.schema_version,
            "command": self.command,
            "config": _jsonable(self.config),
            "records": [
                {
                    "method": r.method,
                    "kind": r.kind,
                    "level": r.level,
                    "metric": r.metric,
                    "value": r.value,
                    "seed": r.seed,
                }
                for r in self.records
            ],
            "aggregates": aggregate_records(self.records),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(_CSV_COLUMNS)
        for r in self.records:
            writer.writerow([r.method, r.kind, r.level, r.metric, r.value, r.seed])
        return buf.getvalue()

    def render(self, fmt: str = "json") -> str:
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return self.to_csv()
        raise ValueError(f"unknown report format {fmt!r}")
