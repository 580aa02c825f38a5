"""Itemized validation reports shared by the validators."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Issue:
    rule: str
    location: str
    message: str

    def to_dict(self) -> dict:
        return {"rule": self.rule, "location": self.location, "message": self.message}


@dataclass
class ValidationReport:
    """Ordered list of violated conditions; empty means everything passed.

    ``checked`` records every rule that was evaluated so callers can tell a
    pass from a rule that was never looked at.
    """

    issues: list[Issue] = field(default_factory=list)
    checked: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues

    def add(self, rule: str, location, message: str) -> None:
        self.issues.append(Issue(rule, str(location), message))

    def check(self, rule: str) -> None:
        if rule not in self.checked:
            self.checked.append(rule)

    def failed_rules(self) -> set[str]:
        return {i.rule for i in self.issues}

    def passed(self, rule: str) -> bool:
        return rule in self.checked and rule not in self.failed_rules()

    def extend(self, other: "ValidationReport") -> None:
        self.issues.extend(other.issues)
        for r in other.checked:
            self.check(r)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "checked": list(self.checked),
            "issues": [i.to_dict() for i in self.issues],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)
