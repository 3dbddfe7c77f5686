"""IdentityReport and its CSV/JSON serialization."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

__all__ = ["IdentityReport", "make_report", "CSV_FIELDS", "reports_to_csv", "reports_to_json", "fmt"]

CSV_FIELDS = ("kind", "param_json", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "defect", "tol", "pass")


@dataclass(frozen=True)
class IdentityReport:
    """lhs vs rhs of one numerical identity instance.  ``passed`` iff defect <= tolerance."""

    kind: str
    lhs: complex
    rhs: complex
    defect: float
    tolerance: float
    passed: bool
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.passed != (self.defect <= self.tolerance):
            raise ValueError("pass flag inconsistent with defect and tolerance")


def _clean(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, np.ndarray):
        return [_clean(x) for x in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if isinstance(v, complex):
        return [v.real, v.imag]
    return v


def make_report(kind: str, lhs, rhs, tol: float, relative: bool = False, scale: Optional[float] = None,
                **metadata) -> IdentityReport:
    """Build a report; ``relative`` divides by |rhs|, ``scale`` by a given magnitude."""
    lhs, rhs = complex(lhs), complex(rhs)
    d = abs(lhs - rhs)
    if relative:
        d = d / max(abs(rhs), 1e-300)
    elif scale is not None:
        d = d / scale
    if math.isnan(d):
        d = math.inf
    meta = {k: _clean(v) for k, v in metadata.items()}
    return IdentityReport(kind, lhs, rhs, float(d), float(tol), bool(d <= tol), meta)


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def _row(r: IdentityReport) -> list[str]:
    return [
        r.kind,
        json.dumps(r.metadata, sort_keys=True, separators=(",", ":")),
        fmt(r.lhs.real), fmt(r.lhs.imag), fmt(r.rhs.real), fmt(r.rhs.imag),
        fmt(r.defect), fmt(r.tolerance), "true" if r.passed else "false",
    ]


def reports_to_csv(reports: Iterable[IdentityReport], header: bool = True) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if header:
        w.writerow(CSV_FIELDS)
    for r in reports:
        w.writerow(_row(r))
    return buf.getvalue()


def reports_to_json(reports: Iterable[IdentityReport]) -> str:
    rows = [dict(zip(CSV_FIELDS, _row(r))) for r in reports]
    for row in rows:
        row["param_json"] = json.loads(row["param_json"])
        row["pass"] = row["pass"] == "true"
    return json.dumps(rows, indent=2, sort_keys=True)
