"""Report serialization, run manifests and locale-independent number output."""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone

from . import __version__
from .harness import TestRecord, Verdict, VerificationReport

__all__ = [
    "RunManifest",
    "format_fixed",
    "format_sci",
    "report_from_json",
    "report_to_csv",
    "report_to_json",
]


def format_sci(x: float) -> str:
    """``1.264241117657115e0``: 15 decimals, unpadded exponent."""
    x = float(x)
    if x != x or x in (float("inf"), float("-inf")):
        return repr(x)
    mantissa, exp = f"{x:.15e}".split("e")
    return f"{mantissa}e{int(exp)}"


def format_fixed(x: float) -> str:
    """Fixed point with 15 decimals for moderate magnitudes, else :func:`format_sci`."""
    x = float(x)
    if x == 0.0 or 1e-3 <= abs(x) < 1e3:
        return f"{x:.15f}"
    return format_sci(x)


def _timestamp() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    now = datetime.fromtimestamp(int(epoch), timezone.utc) if epoch else datetime.now(timezone.utc)
    return now.isoformat(timespec="seconds")


@dataclass(frozen=True)
class RunManifest:
    """Everything needed to rerun a command; ``timestamp`` is informational."""

    command: str
    flags: dict
    functions: tuple[str, ...] = ()
    operator: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)
    version: str = __version__
    timestamp: str = field(default_factory=_timestamp)

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "flags": self.flags,
            "functions": list(self.functions),
            "operator": self.operator,
            "config": self.config,
            "version": self.version,
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RunManifest":
        return cls(d["command"], d["flags"], tuple(d["functions"]), d["operator"], d["config"],
                   d["version"], d["timestamp"])


def _record_to_dict(r: TestRecord) -> dict:
    return {"name": r.name, "role": r.role, "value": r.value, "threshold": r.threshold,
            "passed": r.passed, "kind": r.kind, "detail": r.detail}


def report_to_json(report: VerificationReport, manifest: RunManifest | None = None) -> str:
    body = {
        "operator": report.operator,
        "tests": [_record_to_dict(r) for r in report.tests],
        "verdict": report.verdict.value,
        "qualifier": report.qualifier,
        "pointwise_local": report.pointwise_local,
        "config": report.config,
        "notes": list(report.notes),
    }
    if manifest is not None:
        body["manifest"] = manifest.to_dict()
    return json.dumps(body, sort_keys=True, indent=2) + "\n"


def report_from_json(text: str) -> tuple[VerificationReport, RunManifest | None]:
    d = json.loads(text)
    report = VerificationReport(
        operator=d["operator"],
        tests=tuple(TestRecord(**r) for r in d["tests"]),
        verdict=Verdict(d["verdict"]),
        qualifier=d["qualifier"],
        pointwise_local=d["pointwise_local"],
        config=d["config"],
        notes=tuple(d["notes"]),
    )
    manifest = RunManifest.from_dict(d["manifest"]) if "manifest" in d else None
    return report, manifest


def report_to_csv(report: VerificationReport, manifest: RunManifest | None = None) -> str:
    """Long-format CSV: one row per test, then the verdict, then manifest keys."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["record", "name", "role", "value", "threshold", "passed", "detail"])
    for r in report.tests:
        w.writerow(["test", r.name, r.role, format_sci(r.value), format_sci(r.threshold),
                    "true" if r.passed else "false", r.detail])
    w.writerow(["verdict", report.verdict.value, "", "", "", "", report.qualifier])
    w.writerow(["pointwise_local", "true" if report.pointwise_local else "false", "", "", "", "", ""])
    for note in report.notes:
        w.writerow(["note", "", "", "", "", "", note])
    if manifest is not None:
        for key, value in manifest.to_dict().items():
            text = value if isinstance(value, str) else json.dumps(value, sort_keys=True)
            w.writerow(["manifest", key, "", "", "", "", text])
    return buf.getvalue()
