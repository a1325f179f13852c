"""Assertion records and experiment reports.

Every checked claim is recorded as a Check carrying an anchor string, the
exact statement being tested (a formula or contract in plain text), so a
report is readable on its own.  Reports serialize to JSON lines plus a
human-readable summary; content is deterministic for a fixed (config, seed)
apart from the timing fields.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path


@dataclass
class Check:
    name: str
    anchor: str
    passed: bool
    details: dict = field(default_factory=dict)

    def to_jsonable(self) -> dict:
        return {"name": self.name, "anchor": self.anchor,
                "passed": self.passed, "details": self.details}


@dataclass
class Report:
    experiment: str
    config: dict
    checks: list[Check] = field(default_factory=list)
    elapsed_s: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def extend(self, checks) -> None:
        self.checks.extend(checks)

    def to_jsonable(self, include_timing: bool = True) -> dict:
        out = {
            "experiment": self.experiment,
            "config": self.config,
            "passed": self.passed,
            "checks": [c.to_jsonable() for c in self.checks],
        }
        if include_timing:
            out["elapsed_s"] = self.elapsed_s
        return out

    def to_json_lines(self, include_timing: bool = True) -> str:
        header = {"experiment": self.experiment, "config": self.config,
                  "passed": self.passed, "n_checks": len(self.checks)}
        if include_timing:
            header["elapsed_s"] = self.elapsed_s
        lines = [json.dumps(header, sort_keys=True, default=str)]
        for c in self.checks:
            rec = {"experiment": self.experiment}
            rec.update(c.to_jsonable())
            lines.append(json.dumps(rec, sort_keys=True, default=str))
        return "\n".join(lines) + "\n"

    def summary(self) -> str:
        lines = [f"== {self.experiment}: {'PASS' if self.passed else 'FAIL'} "
                 f"({sum(c.passed for c in self.checks)}/{len(self.checks)} checks, "
                 f"{self.elapsed_s:.2f}s)"]
        for c in self.checks:
            mark = "ok  " if c.passed else "FAIL"
            lines.append(f"  [{mark}] {c.name}  ::  {c.anchor}")
            if not c.passed and c.details:
                lines.append(f"         details: {json.dumps(c.details, default=str)}")
        return "\n".join(lines)


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        return False


def write_report(report: Report, out_dir: str | Path) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{report.experiment}.jsonl"
    path.write_text(report.to_json_lines(), encoding="utf-8")
    return path
