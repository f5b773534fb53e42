"""Suite reports: JSON (one object per suite) and an optional flat CSV of ratios."""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"
HYPOTHESIS_NOT_MET = "hypothesis-not-met"
STABILITY_LIMIT = 2.0

CSV_COLUMNS = ("suite", "sample_id", "s", "p", "p1", "p2", "lhs", "rhs", "ratio")


def _clean(obj):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    if isinstance(obj, complex):
        return [_clean(obj.real), _clean(obj.imag)]
    return obj


@dataclass
class SuiteReport:
    suite: str
    status: str = PASS
    constants: dict = field(default_factory=dict)
    stability: dict = field(default_factory=dict)
    metrics: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    samples: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    config: dict = field(default_factory=dict)
    runtime_s: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status in (PASS, HYPOTHESIS_NOT_MET)

    def check(self, name: str, ok: bool, value=None):
        """Record one assertion of the suite."""
        self.checks[name] = {"ok": bool(ok), "value": value}

    def finalize(self):
        if not all(c["ok"] for c in self.checks.values()):
            self.status = FAIL
        elif any(not math.isfinite(v) for v in self.constants.values()):
            self.status = FAIL
            self.notes.append("non-finite constant")
        elif self.stability.get("factor", 1.0) > STABILITY_LIMIT:
            self.status = INCONCLUSIVE
        return self

    def to_dict(self, runtime: bool = True) -> dict:
        out = {
            "suite": self.suite, "pass": self.passed, "status": self.status,
            "constants": self.constants, "stability": self.stability, "metrics": self.metrics,
            "checks": self.checks, "samples": self.samples, "notes": self.notes,
            "config": self.config,
        }
        if runtime:
            out["runtime_s"] = round(self.runtime_s, 3)
        return _clean(out)

    def to_json(self, runtime: bool = True) -> str:
        return json.dumps(self.to_dict(runtime), sort_keys=True, indent=2)

    def summary(self) -> str:
        consts = ", ".join(f"{k}={v:.3g}" for k, v in sorted(self.constants.items()))
        failed = [k for k, c in self.checks.items() if not c["ok"]]
        tail = f" failed: {', '.join(failed)}" if failed else ""
        return f"{self.suite}: {self.status}" + (f" [{consts}]" if consts else "") + tail


def write_json(reports, path):
    body = [r.to_dict() for r in reports]
    with open(path, "w") as fh:
        json.dump(body if len(body) != 1 else body[0], fh, sort_keys=True, indent=2)
        fh.write("\n")


def write_csv(reports, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in reports:
            for i, sample in enumerate(r.samples):
                if "ratio" not in sample:
                    continue
                row = [r.suite, sample.get("id", i)]
                row += [sample.get(c, "") for c in CSV_COLUMNS[2:]]
                writer.writerow(_clean(row))
