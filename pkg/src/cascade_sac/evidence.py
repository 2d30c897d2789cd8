"""Registry of security evidence artifacts linked to solution nodes."""

from __future__ import annotations

import csv
import dataclasses
import datetime as dt
import enum
from typing import Iterator, Optional

from .findings import Finding, canonical
from .graph import AssuranceCase, NodeKind

REGISTRY_HEADER = ["id", "title", "type", "uri", "created_at", "valid_days", "owner_role"]


class EvidenceType(str, enum.Enum):
    RISK_ANALYSIS = "risk_analysis"
    GAP_ANALYSIS = "gap_analysis"
    VERIFICATION = "verification"
    SECURITY_TRAINING = "security_training"
    AWARENESS_PROGRAM = "awareness_program"
    INCIDENT_LOG = "incident_log"
    OTHER = "other"


class Role(str, enum.Enum):
    DEVELOPER = "developer"
    PRODUCT_OWNER = "product_owner"
    RISK_OWNER = "risk_owner"
    AUDITOR = "auditor"
    MANAGEMENT = "management"
    SECURITY_OFFICER = "security_officer"
    LEGAL_TEAM = "legal_team"


class Responsibility(str, enum.Enum):
    CREATION = "creation"
    OWNERSHIP = "ownership"
    COLLECTION = "collection"
    MAINTENANCE = "maintenance"
    GOVERNANCE = "governance"


_R = Responsibility
_MATRIX = {
    Role.DEVELOPER: frozenset({_R.CREATION, _R.MAINTENANCE}),
    Role.PRODUCT_OWNER: frozenset({_R.OWNERSHIP, _R.GOVERNANCE}),
    Role.RISK_OWNER: frozenset({_R.OWNERSHIP}),
    Role.AUDITOR: frozenset({_R.GOVERNANCE}),
    Role.MANAGEMENT: frozenset({_R.GOVERNANCE}),
    Role.SECURITY_OFFICER: frozenset({_R.CREATION, _R.COLLECTION, _R.MAINTENANCE, _R.GOVERNANCE}),
    Role.LEGAL_TEAM: frozenset({_R.COLLECTION}),
}


def responsibility_matrix() -> dict[Role, frozenset[Responsibility]]:
    """Which evidence-management activities each role carries out."""
    return dict(_MATRIX)


@dataclasses.dataclass(frozen=True)
class EvidenceItem:
    id: str
    title: str
    etype: EvidenceType
    uri: str
    created_at: dt.date
    valid_days: Optional[int]  # None = unlimited
    owner_role: Role

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("evidence id must be non-empty")
        if self.valid_days is not None and self.valid_days < 1:
            raise ValueError(f"evidence {self.id}: valid_days must be >= 1")

    @property
    def expires(self) -> Optional[dt.date]:
        if self.valid_days is None:
            return None
        return self.created_at + dt.timedelta(days=self.valid_days)

    def is_stale(self, as_of: dt.date) -> bool:
        return self.expires is not None and self.expires < as_of


@dataclasses.dataclass(frozen=True)
class Registry:
    """Immutable evidence catalogue; iteration is in id order."""

    items: tuple[EvidenceItem, ...] = ()

    def __iter__(self) -> Iterator[EvidenceItem]:
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __contains__(self, item_id: object) -> bool:
        return any(i.id == item_id for i in self.items)

    def get(self, item_id: str) -> Optional[EvidenceItem]:
        return next((i for i in self.items if i.id == item_id), None)


def register(registry: Registry, item: EvidenceItem) -> Registry:
    if item.id in registry:
        raise ValueError(f"duplicate evidence id {item.id!r}")
    return Registry(tuple(sorted(registry.items + (item,), key=lambda i: i.id)))


def link_report(case: AssuranceCase, registry: Registry) -> list[Finding]:
    """Warn about solutions without registered evidence and unused registry items."""
    findings = []
    referenced = set()
    for sol in case.of_kind(NodeKind.SOLUTION):
        item = sol.attrs.get("item")
        if item is None:
            findings.append(Finding("ORPHAN_SOLUTION", sol.id, "solution has no item= link"))
        elif item not in registry:
            findings.append(Finding("ORPHAN_SOLUTION", sol.id, f"item={item} is not registered"))
        else:
            referenced.add(item)
    for it in registry:
        if it.id not in referenced:
            findings.append(Finding("ORPHAN_SOLUTION", it.id, "registered evidence is referenced by no solution"))
    return canonical(findings)


def staleness_report(registry: Registry, as_of: dt.date) -> list[Finding]:
    return canonical(
        Finding("STALE_EVIDENCE", it.id, f"expired {it.expires.isoformat()}")
        for it in registry
        if it.is_stale(as_of)
    )


def load_registry(path) -> Registry:
    registry = Registry()
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != REGISTRY_HEADER:
            raise ValueError(f"{path}: header must be {','.join(REGISTRY_HEADER)}")
        for row in reader:
            where = f"{path}:{reader.line_num}"
            try:
                valid = row["valid_days"].strip()
                item = EvidenceItem(
                    id=row["id"],
                    title=row["title"],
                    etype=EvidenceType(row["type"]),
                    uri=row["uri"],
                    created_at=dt.date.fromisoformat(row["created_at"]),
                    valid_days=int(valid) if valid else None,
                    owner_role=Role(row["owner_role"]),
                )
                registry = register(registry, item)
            except ValueError as exc:
                raise ValueError(f"{where}: {exc}") from None
    return registry


def dump_registry(registry: Registry, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(REGISTRY_HEADER)
    for it in registry:
        writer.writerow(
            [it.id, it.title, it.etype.value, it.uri, it.created_at.isoformat(),
             "" if it.valid_days is None else it.valid_days, it.owner_role.value]
        )
