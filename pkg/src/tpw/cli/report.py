"""JSON reports written by every subcommand.

Everything except the ``timing`` block is a function of (model, seed,
grid parameters), so re-runs are byte-identical apart from timing.
"""

from __future__ import annotations

import json
import math

from tpw.checks import CheckResult
from tpw.tensorcalc.model import Model

SCHEMA = "tpw-report/1"


def _clean(value):
    """Make a value JSON-safe: non-finite floats become strings, tuples lists."""
    if isinstance(value, float):
        return value if math.isfinite(value) else str(value)
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if hasattr(value, "item") and callable(value.item):
        return _clean(value.item())
    return value


def model_summary(model: Model) -> dict:
    return {"name": model.name, "dim": model.n, "exact": model.exact, "has_phi": model.has_phi}


def build_report(
    command: str,
    model: Model,
    checks: list[CheckResult] | None = None,
    parameters: dict | None = None,
    results: dict | None = None,
    warnings: list[str] | None = None,
    total_seconds: float = 0.0,
) -> dict:
    """Assemble a report; ``passed`` is true when every check passes (vacuously for none)."""
    checks = checks or []
    report = {
        "schema": SCHEMA,
        "command": command,
        "model": model_summary(model),
        "calibration": model.calibration.as_dict(),
        "parameters": parameters or {},
        "checks": [c.to_json() for c in checks],
        "passed": all(c.passed for c in checks),
        "warnings": warnings or [],
        "timing": {"total_seconds": total_seconds, "checks": {c.name: c.seconds for c in checks}},
    }
    if results is not None:
        report["results"] = results
    return _clean(report)


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def without_timing(report: dict) -> dict:
    return {k: v for k, v in report.items() if k != "timing"}
