"""Named check results shared by the verification modules and the reports.

A check is a list of parts; each part compares one measured value with a
threshold.  The check passes when every part does.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

RELATIONS = ("<=", ">=", "==0", "!=0")


@dataclass
class Part:
    """``relation`` is "<=", ">=", "==0" (exactly zero) or "!=0" (strictly nonzero)."""

    label: str
    value: float
    threshold: float = 0.0
    relation: str = "<="

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise ValueError(f"unknown relation {self.relation!r}")
        self.value = float(self.value)
        self.threshold = float(self.threshold)

    @property
    def passed(self) -> bool:
        if math.isnan(self.value):
            return False
        if self.relation == "<=":
            return self.value <= self.threshold
        if self.relation == ">=":
            return self.value >= self.threshold
        if self.relation == "==0":
            return self.value == 0.0
        return self.value != 0.0

    def describe(self) -> str:
        if self.relation in ("==0", "!=0"):
            return f"{self.label} = {self.value:.3g} ({self.relation[:2]} 0)"
        return f"{self.label} = {self.value:.3g} ({self.relation} {self.threshold:.3g})"

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "value": _json_float(self.value),
            "threshold": _json_float(self.threshold),
            "relation": self.relation,
            "passed": self.passed,
        }


@dataclass
class CheckResult:
    name: str
    parts: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return bool(self.parts) and all(p.passed for p in self.parts)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name}: " + "; ".join(p.describe() for p in self.parts)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "parts": [p.to_json() for p in self.parts],
            "details": self.details,
        }


def _json_float(x: float):
    return x if math.isfinite(x) else str(x)


def worst(values) -> float:
    """Largest entry, NaN-propagating (an empty list gives 0)."""
    values = [float(v) for v in values]
    if any(math.isnan(v) for v in values):
        return math.nan
    return max(values, default=0.0)
