"""Uniform check reports with deterministic text and JSON rendering.

Every engine reports as a tree of checks {name, cite, status, data}; the
cite string names the mathematical fact being certified so that golden
outputs double as a traceability matrix.  Identical inputs must produce
byte-identical renderings, so dictionaries are emitted with sorted keys and
no volatile fields.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

PASS = "pass"
FAIL = "fail"
INCOMPLETE = "incomplete"
RECORDED = "recorded"

_STATUSES = (PASS, FAIL, INCOMPLETE, RECORDED)


@dataclass
class Check:
    name: str
    cite: str
    status: str
    data: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in _STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "check": self.name,
            "cite": self.cite,
            "status": self.status,
            "data": _plain(self.data),
        }


@dataclass
class Report:
    title: str
    checks: List[Check] = field(default_factory=list)
    children: List["Report"] = field(default_factory=list)

    def add(self, name: str, cite: str, status: str, **data) -> Check:
        check = Check(name, cite, status, data)
        self.checks.append(check)
        return check

    def add_child(self, child: "Report") -> "Report":
        self.children.append(child)
        return child

    def all_checks(self) -> List[Check]:
        out = list(self.checks)
        for child in self.children:
            out.extend(child.all_checks())
        return out

    @property
    def ok(self) -> bool:
        return all(c.status != FAIL for c in self.all_checks())

    @property
    def complete(self) -> bool:
        return all(c.status not in (FAIL, INCOMPLETE) for c in self.all_checks())

    def counts(self) -> Dict[str, int]:
        out = {s: 0 for s in _STATUSES}
        for c in self.all_checks():
            out[c.status] += 1
        return out

    def to_dict(self) -> Dict[str, Any]:
        return {
            "title": self.title,
            "checks": [c.to_dict() for c in self.checks],
            "children": [c.to_dict() for c in self.children],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def render_text(self, indent: int = 0) -> str:
        pad = "  " * indent
        lines = [f"{pad}{self.title}"]
        for c in self.checks:
            tag = c.status.upper()
            data = ""
            if c.data:
                data = "  " + json.dumps(_plain(c.data), sort_keys=True)
            lines.append(f"{pad}  [{tag}] {c.name} ({c.cite}){data}")
        for child in self.children:
            lines.append(child.render_text(indent + 1))
        return "\n".join(lines)


def _plain(value: Any) -> Any:
    """Recursively convert to JSON-safe builtins with deterministic order."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in sorted(value.items(), key=lambda t: str(t[0]))}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return str(value)
