"""Verification reports (JSON schema "v1")."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone

SCHEMA = "v1"


@dataclass(frozen=True)
class Check:
    id: str
    description: str
    value: float
    reference: float
    residual: float
    tolerance: float
    passed: bool = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        for name in ("value", "reference", "residual", "tolerance"):
            object.__setattr__(self, name, float(getattr(self, name)))
        ok = bool(self.residual <= self.tolerance)  # NaN compares false
        if self.passed is not None and bool(self.passed) != ok:
            raise ValueError(f"check {self.id}: pass flag disagrees with residual <= tolerance")
        object.__setattr__(self, "passed", ok)


def check(id, description, value, reference, tolerance, residual=None) -> Check:
    """Build a Check; the residual defaults to |value - reference|."""
    if residual is None:
        residual = abs(float(value) - float(reference))
    return Check(id, description, value, reference, residual, tolerance)


def bound_check(id, description, value, tolerance) -> Check:
    """A violation-style check: value is itself the residual, reference 0."""
    return Check(id, description, value, 0.0, max(float(value), 0.0) if not math.isnan(value) else value,
                 tolerance)


@dataclass
class VerificationReport:
    suite: str
    checks: list = field(default_factory=list)
    timestamp: str = ""
    config: dict = field(default_factory=dict)
    space: dict = field(default_factory=dict)
    schema: str = SCHEMA

    def __post_init__(self):
        if not self.timestamp:
            self.timestamp = datetime.now(timezone.utc).isoformat(timespec="seconds")

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        data = asdict(self)
        data["checks"] = [asdict(c) for c in self.checks]
        return data

    def to_json(self, indent: int | None = 2) -> str:
        # NaN / Infinity survive through Python's json extensions
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "VerificationReport":
        if data.get("schema") != SCHEMA:
            raise ValueError(f"unsupported report schema {data.get('schema')!r}")
        checks = [Check(**c) for c in data["checks"]]
        return cls(data["suite"], checks, data["timestamp"], dict(data.get("config", {})),
                   dict(data.get("space", {})), data["schema"])

    @classmethod
    def from_json(cls, text: str) -> "VerificationReport":
        return cls.from_dict(json.loads(text))

    def table(self) -> str:
        lines = [f"suite {self.suite}: {'PASS' if self.passed else 'FAIL'} "
                 f"({len(self.checks) - len(self.failures)}/{len(self.checks)})"]
        width = max([len(c.id) for c in self.checks] + [5])
        for c in self.checks:
            flag = "pass" if c.passed else "FAIL"
            lines.append(f"  {flag}  {c.id:<{width}}  residual={c.residual:.3e}  tol={c.tolerance:.1e}")
        return "\n".join(lines)


def fmt(x) -> str:
    """17 significant digits, '.' decimal, independent of locale."""
    if isinstance(x, str):
        return x
    if isinstance(x, (bool,)) or (isinstance(x, int) and not isinstance(x, bool)):
        return str(int(x))
    return format(float(x), ".17g")


def rows_to_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()
