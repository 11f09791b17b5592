"""Violation reports returned by the validators."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Violation:
    kind: str
    subject: str
    detail: str = ""

    def __str__(self) -> str:
        return f"{self.kind}: {self.subject}" + (f" ({self.detail})" if self.detail else "")


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)
    universe: str = ""

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, kind: str, subject: object, detail: str = "") -> None:
        self.violations.append(Violation(kind, str(subject), detail))

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}


@dataclass
class Report:
    """Ordered key/value lines, used for diagnostics that are not violations."""

    title: str
    entries: list[tuple[str, str]] = field(default_factory=list)

    def add(self, key: str, value: object) -> None:
        self.entries.append((key, str(value)))

    def get(self, key: str) -> str | None:
        return next((v for k, v in self.entries if k == key), None)

    def __str__(self) -> str:
        return "\n".join([self.title] + [f"  {k}: {v}" for k, v in self.entries])
