"""Report entries shared by all checkers."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any


def _plain(x):
    if isinstance(x, (tuple, list)):
        return [_plain(y) for y in x]
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if hasattr(x, "item"):
        return x.item()
    return x


@dataclass
class Violation:
    check: str
    witness: Any = None
    expected: Any = None
    actual: Any = None

    def to_json(self) -> dict:
        return {k: _plain(v) for k, v in asdict(self).items()}


@dataclass
class Report:
    """Outcome of one verification run; empty ``violations`` means pass."""

    name: str
    violations: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, check, witness=None, expected=None, actual=None):
        self.violations.append(Violation(check, witness, expected, actual))

    def extend(self, other: "Report"):
        self.violations.extend(other.violations)
        self.warnings.extend(other.warnings)
        self.info.update({f"{other.name}.{k}": v for k, v in other.info.items()})

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "ok": self.ok,
            "violations": [v.to_json() for v in self.violations],
            "warnings": list(self.warnings),
            "info": _plain(self.info),
        }
