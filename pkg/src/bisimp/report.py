"""Pass/fail bookkeeping shared by every verifier."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Any

PASS = "PASS"
FAIL = "FAIL"
VACUOUS = "VACUOUS"
SKIPPED = "SKIPPED"
STATUSES = (PASS, FAIL, VACUOUS, SKIPPED)


def jsonable(obj):
    """Convert numpy scalars/arrays and tuples into plain JSON values."""
    if hasattr(obj, "tolist"):
        return obj.tolist()
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    return obj


@dataclass
class Check:
    name: str
    status: str
    witness: Any = None
    detail: str = ""

    def to_dict(self):
        out = {"name": self.name, "status": self.status}
        if self.witness is not None:
            out["witness"] = jsonable(self.witness)
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class VerificationReport:
    title: str
    checks: list = field(default_factory=list)
    info: dict = field(default_factory=dict)
    started: float = field(default_factory=time.perf_counter, repr=False)
    wall_time: float = 0.0

    def add(self, name, ok, witness=None, detail=""):
        """Record a check; ``ok`` is a bool or one of the status strings."""
        if isinstance(ok, str):
            status = ok
        else:
            status = PASS if ok else FAIL
        if status not in STATUSES:
            raise ValueError(f"unknown status {status!r}")
        if status == FAIL and witness is None:
            raise ValueError(f"FAIL recorded without a witness: {name}")
        if status == VACUOUS and not detail:
            raise ValueError(f"VACUOUS recorded without a justification: {name}")
        c = Check(name, status, witness, detail)
        self.checks.append(c)
        return c

    def extend(self, other, prefix=""):
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.status, c.witness, c.detail))
        return self

    def finish(self):
        self.wall_time = time.perf_counter() - self.started
        return self

    @property
    def ok(self):
        return all(c.status != FAIL for c in self.checks)

    @property
    def failures(self):
        return [c for c in self.checks if c.status == FAIL]

    def counts(self):
        out = {s: 0 for s in STATUSES}
        for c in self.checks:
            out[c.status] += 1
        return out

    def get(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self):
        # wall_time is left out so identical inputs give identical output
        return {
            "title": self.title,
            "ok": self.ok,
            "summary": self.counts(),
            "info": jsonable(self.info),
            "checks": [c.to_dict() for c in self.checks],
        }

    def to_json(self, indent=2):
        return json.dumps(self.to_dict(), indent=indent, ensure_ascii=False)

    def render_text(self, verbose=True):
        lines = [f"== {self.title} =="]
        for k, v in self.info.items():
            lines.append(f"  {k}: {jsonable(v)}")
        for c in self.checks:
            if not verbose and c.status == PASS:
                continue
            line = f"  [{c.status}] {c.name}"
            if c.detail:
                line += f"  ({c.detail})"
            if c.status == FAIL and c.witness is not None:
                line += f"  witness={jsonable(c.witness)}"
            lines.append(line)
        cnt = self.counts()
        lines.append("  summary: " + ", ".join(f"{k}={v}" for k, v in cnt.items())
                     + f"  -> {'OK' if self.ok else 'FAILED'}")
        return "\n".join(lines)

    def __str__(self):
        return self.render_text()
