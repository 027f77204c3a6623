"""Verification report rows and their deterministic CSV/JSON serializations.

Schema contract:
  CSV    header exactly ``check,location,value,tolerance,verdict``, numbers
         rendered with 17 significant digits, LF line endings, UTF-8.
  JSON   top-level object {"meta": {a, lambda, tool_version, xi}, "rows": [...]}
         with sorted keys and round-trip-exact float formatting.

Verdict vocabulary: "pass" and "fail" are reserved for internal-consistency
checks; "discrepancy-logged" marks comparisons between quoted values/formulas
and this toolkit's own oracles, and never affects exit status.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

from . import __version__

VERDICTS = ("pass", "fail", "discrepancy-logged")


@dataclass(frozen=True)
class VerificationRow:
    check: str
    location: str
    value: float
    tolerance: float
    verdict: str

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")
        if not (math.isfinite(self.value) and math.isfinite(self.tolerance)):
            raise ValueError(f"non-finite row value in check {self.check!r}")


@dataclass
class Report:
    lam: float
    xi: float
    rows: list[VerificationRow]

    @property
    def a(self) -> float:
        return math.sqrt(3.0 / self.lam)

    def add(self, check: str, location: str, value: float, tolerance: float, verdict: str) -> None:
        self.rows.append(VerificationRow(check, location, float(value), float(tolerance), verdict))

    def add_check(self, check: str, location: str, value: float, tolerance: float) -> None:
        """Internal-consistency row: pass iff |value| <= tolerance."""
        verdict = "pass" if abs(value) <= tolerance else "fail"
        self.add(check, location, value, tolerance, verdict)

    def add_comparison(self, check: str, location: str, value: float, tolerance: float) -> None:
        """Quoted-value comparison row: agreement passes, disagreement is logged."""
        verdict = "pass" if abs(value) <= tolerance else "discrepancy-logged"
        self.add(check, location, value, tolerance, verdict)

    def failed(self) -> bool:
        return any(row.verdict == "fail" for row in self.rows)

    def exit_code(self) -> int:
        return 1 if self.failed() else 0


def _num17(x: float) -> str:
    return format(float(x), ".17g")


def emit_csv(report: Report) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["check", "location", "value", "tolerance", "verdict"])
    for row in report.rows:
        writer.writerow([row.check, row.location, _num17(row.value), _num17(row.tolerance), row.verdict])
    return buf.getvalue().encode("utf-8")


def emit_json(report: Report) -> bytes:
    payload = {
        "meta": {
            "lambda": report.lam,
            "xi": report.xi,
            "a": report.a,
            "tool_version": __version__,
        },
        "rows": [
            {
                "check": row.check,
                "location": row.location,
                "value": row.value,
                "tolerance": row.tolerance,
                "verdict": row.verdict,
            }
            for row in report.rows
        ],
    }
    return (json.dumps(payload, sort_keys=True, indent=2) + "\n").encode("utf-8")
