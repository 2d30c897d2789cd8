"""Validation findings shared by every checker."""

from __future__ import annotations

import dataclasses
import enum
from typing import Iterable


class Severity(str, enum.Enum):
    ERROR = "error"
    WARNING = "warning"


# Severity is a pure function of the code.
SEVERITY = {
    "DUPLICATE_ID": Severity.ERROR,
    "DUPLICATE_EDGE": Severity.ERROR,
    "DANGLING_REF": Severity.ERROR,
    "CYCLE": Severity.ERROR,
    "MULTI_ROOT": Severity.ERROR,
    "NO_ROOT": Severity.ERROR,
    "BAD_EDGE": Severity.ERROR,
    "UNREACHABLE": Severity.ERROR,
    "DEAD_END": Severity.ERROR,
    "LEVEL_INVERSION": Severity.ERROR,
    "UNKNOWN_BLOCK": Severity.ERROR,
    "MISPLACED_BLOCK": Severity.ERROR,
    "KIND_MISMATCH": Severity.ERROR,
    "MISSING_COMPLETENESS": Severity.ERROR,
    "MISSING_CONFIDENCE": Severity.ERROR,
    "UNSUPPORTED_QUALITY_CLAIM": Severity.ERROR,
    "UNSUPPORTED_COMPLETENESS_CLAIM": Severity.WARNING,
    "ORPHAN_SOLUTION": Severity.WARNING,
    "STALE_EVIDENCE": Severity.WARNING,
    "UNCOVERED_CLAUSE": Severity.WARNING,
}


@dataclasses.dataclass(frozen=True, order=True)
class Finding:
    """One rule violation.

    ``subject`` is a node id, a clause id or an evidence item id depending
    on the code. Ordering is (code, subject, message), which is the
    canonical report order.
    """

    code: str
    subject: str
    message: str = dataclasses.field(default="", compare=True)

    def __post_init__(self) -> None:
        if self.code not in SEVERITY:
            raise ValueError(f"unknown finding code {self.code!r}")

    @property
    def severity(self) -> Severity:
        return SEVERITY[self.code]

    @property
    def is_error(self) -> bool:
        return self.severity is Severity.ERROR

    def to_dict(self) -> dict:
        return {
            "code": self.code,
            "severity": self.severity.value,
            "subject": self.subject,
            "message": self.message,
        }

    def __str__(self) -> str:
        return f"{self.severity.value}: {self.code} [{self.subject}] {self.message}"


def canonical(findings: Iterable[Finding]) -> list[Finding]:
    """Deduplicate and sort findings into report order."""
    return sorted(set(findings))


def has_errors(findings: Iterable[Finding]) -> bool:
    return any(f.is_error for f in findings)
