"""Verification reports: an ordered list of named checks with a status."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

PASS, FAIL, WARN = "PASS", "FAIL", "WARN"


@dataclass(frozen=True)
class Check:
    name: str
    status: str
    detail: str = ""
    topic: str = ""

    @property
    def ok(self) -> bool:
        return self.status != FAIL


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def add(self, name: str, ok: bool, detail: str = "", topic: str = "") -> bool:
        self.checks.append(Check(name, PASS if ok else FAIL, detail, topic))
        return ok

    def warn(self, name: str, detail: str, topic: str = "") -> None:
        self.checks.append(Check(name, WARN, detail, topic))

    def extend(self, other: Report) -> None:
        self.checks.extend(other.checks)

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAIL]

    @property
    def warnings(self) -> list[Check]:
        return [c for c in self.checks if c.status == WARN]

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "passed": self.passed,
            "checks": [asdict(c) for c in self.checks],
            "data": self.data,
        }

    @classmethod
    def from_dict(cls, data: dict) -> Report:
        return cls(data["title"], [Check(**c) for c in data["checks"]], dict(data.get("data", {})))

    def render(self) -> str:
        lines = [self.title]
        for c in self.checks:
            line = f"  [{c.status}] {c.name}"
            if c.detail:
                line += f": {c.detail}"
            lines.append(line)
        return "\n".join(lines)

    def __str__(self) -> str:
        return self.render()
