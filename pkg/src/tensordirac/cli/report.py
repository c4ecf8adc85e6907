"""Report assembly, JSON encoding and the text renderer."""

from __future__ import annotations

import datetime as _dt
import json
import math
import platform

import numpy as np
import scipy

from .scenario import SCHEMA_VERSION, Scenario

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_WARN = 0, 1, 2, 3


def _clean(obj):
    """Convert numpy scalars/arrays and complex values into plain JSON types."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _clean(obj.real), "im": _clean(obj.imag)}
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    return obj


def overall_status(checks) -> str:
    statuses = {c["status"] for c in checks}
    if "fail" in statuses:
        return "fail"
    if "warn" in statuses:
        return "warn"
    return "pass"


def exit_code(report: dict) -> int:
    return {"pass": EXIT_PASS, "fail": EXIT_FAIL, "warn": EXIT_WARN}[report["status"]]


def versions() -> dict:
    from .. import __version__

    return {
        "tensordirac": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "python": platform.python_version(),
    }


def build_report(command: str, sc: Scenario, checks, tol_scale: float = 1.0, extra: dict | None = None) -> dict:
    items = sorted((c.to_json() for c in checks), key=lambda c: c["name"])
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "scenario": sc.to_json(),
        "status": overall_status(items),
        "checks": items,
        "provenance": {
            "seed": sc.seed,
            "tol_scale": tol_scale,
            "tolerances": dict(sorted(sc.tolerances.items())),
            "versions": versions(),
            "generated_at": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        },
    }
    if extra:
        report.update(extra)
    return _clean(report)


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _fmt(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, float):
        return f"{v:.3e}"
    return str(v)


def render_text(report: dict) -> str:
    """Human-readable summary; depends only on the report contents."""
    lines = [
        f"{report['command']} {report['scenario']['name']}: {report['status'].upper()}",
        f"seed={report['provenance']['seed']} tol_scale={report['provenance']['tol_scale']}",
    ]
    width = max((len(c["name"]) for c in report["checks"]), default=0)
    for c in report["checks"]:
        lines.append(
            f"  [{c['status']:>4}] {c['name']:<{width}}  residual={_fmt(c['residual'])}  tol={_fmt(c['tolerance'])}"
        )
        for key in ("error", "message", "reason"):
            if key in c["details"]:
                lines.append(f"         {key}: {c['details'][key]}")
    for key in ("refinement", "artifacts"):
        if key in report:
            lines.append(f"{key}:")
            payload = report[key]
            if isinstance(payload, dict):
                for k in sorted(payload):
                    lines.append(f"  {k}: {payload[k]}")
            else:
                for row in payload:
                    lines.append("  " + "  ".join(f"{k}={_fmt(row[k])}" for k in sorted(row)))
    return "\n".join(lines) + "\n"
