"""Uniform verification reports and their JSON encoding."""
from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any

SCHEMA = "qbundle.report/1"

PASS, FAIL, VACUOUS = "pass", "fail", "vacuous"


@dataclass
class Check:
    name: str
    status: str
    residual: float | None = None
    exact: bool = True
    witness: str | None = None
    detail: Any = None
    runtime: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status != FAIL

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "status": self.status,
            "exact": self.exact,
            "residual": self.residual,
            "witness": self.witness,
            "runtime": round(self.runtime, 6),
        }
        if self.detail is not None:
            d["detail"] = self.detail
        return d


@dataclass
class Report:
    suite: str
    checks: list[Check] = field(default_factory=list)
    environment: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    children: list["Report"] = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        statuses = [c.status for c in self.checks] + [r.status for r in self.children]
        if any(s == FAIL for s in statuses):
            return FAIL
        if statuses and all(s == VACUOUS for s in statuses):
            return VACUOUS
        return PASS

    @property
    def passed(self) -> bool:
        return self.status != FAIL

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def add(self, name, ok, *, residual=None, exact=True, witness=None, detail=None,
            runtime=0.0, vacuous=False) -> Check:
        status = VACUOUS if vacuous else (PASS if ok else FAIL)
        c = Check(name, status, residual, exact, witness, detail, runtime)
        self.checks.append(c)
        return c

    @contextmanager
    def timed(self):
        """Yield a dict; its ``runtime`` key is filled on exit."""
        box: dict = {}
        t0 = time.perf_counter()
        try:
            yield box
        finally:
            box["runtime"] = time.perf_counter() - t0

    def to_dict(self) -> dict:
        d = {
            "schema": SCHEMA,
            "suite": self.suite,
            "status": self.status,
            "environment": self.environment,
            "checks": [c.to_dict() for c in self.checks],
        }
        if self.notes:
            d["notes"] = list(self.notes)
        if self.summary:
            d["summary"] = self.summary
        if self.children:
            d["suites"] = [r.to_dict() for r in self.children]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, default=str)

    def to_text(self) -> str:
        lines = [f"[{self.status.upper()}] {self.suite}"]
        for c in self.checks:
            extra = ""
            if c.residual is not None:
                extra += f" residual={c.residual:.3e}"
            if c.witness:
                extra += f" witness={c.witness}"
            lines.append(f"  {c.status:7s} {c.name}{extra}")
        for k in sorted(self.summary):
            lines.append(f"  {k}: {self.summary[k]}")
        for note in self.notes:
            lines.append(f"  note: {note}")
        for child in self.children:
            lines.extend("  " + line for line in child.to_text().splitlines())
        return "\n".join(lines)


def strip_runtime(d):
    """Copy of a report dict with every ``runtime`` field removed."""
    if isinstance(d, dict):
        return {k: strip_runtime(v) for k, v in d.items() if k != "runtime"}
    if isinstance(d, list):
        return [strip_runtime(v) for v in d]
    return d
