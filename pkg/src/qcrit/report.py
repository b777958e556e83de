"""Line-oriented verification reports."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

PASS, FAIL, SKIP = "pass", "fail", "skip"


@dataclass
class Check:
    name: str
    params: str
    status: str
    lhs: Any = None
    rhs: Any = None
    note: str | None = None

    def render(self) -> str:
        head = f"{self.status.upper()} {self.name}"
        if self.params:
            head += f" [{self.params}]"
        if self.status == FAIL:
            head += f" lhs={self.lhs} rhs={self.rhs}"
        elif self.status == SKIP:
            head += f" ({self.note or 'hypothesis not met'})"
        return head

    def to_dict(self) -> dict:
        d = {"name": self.name, "params": self.params, "status": self.status}
        if self.status == FAIL:
            d["lhs"], d["rhs"] = str(self.lhs), str(self.rhs)
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class Report:
    title: str = ""
    checks: list[Check] = field(default_factory=list)

    def compare(self, name: str, params: str, lhs, rhs) -> bool:
        ok = lhs == rhs
        self.checks.append(Check(name, params, PASS if ok else FAIL, lhs, rhs))
        return ok

    def expect(self, name: str, params: str, ok: bool, lhs=None, rhs=None) -> bool:
        self.checks.append(Check(name, params, PASS if ok else FAIL, lhs, rhs))
        return ok

    def skip(self, name: str, params: str, note: str = "hypothesis not met") -> None:
        self.checks.append(Check(name, params, SKIP, note=note))

    def extend(self, other: "Report") -> None:
        self.checks.extend(other.checks)

    def count(self, status: str) -> int:
        return sum(c.status == status for c in self.checks)

    @property
    def ok(self) -> bool:
        return self.count(FAIL) == 0

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAIL]

    def summary(self) -> str:
        return f"summary: {self.count(PASS)} pass, {self.count(FAIL)} fail, {self.count(SKIP)} skip"

    def render(self) -> str:
        lines = [self.title] if self.title else []
        lines += [c.render() for c in self.checks]
        lines.append(self.summary())
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "ok": self.ok,
            "pass": self.count(PASS),
            "fail": self.count(FAIL),
            "skip": self.count(SKIP),
            "checks": [c.to_dict() for c in self.checks],
        }
