"""Requirements corpus records and CSV I/O."""

from __future__ import annotations

import csv
import dataclasses
import enum
from typing import Iterable

DATASET_HEADER = ["project", "section", "req_id", "text", "label"]


class Label(str, enum.Enum):
    SEC = "sec"
    NONSEC = "nonsec"
    UNLABELED = ""


@dataclasses.dataclass(frozen=True)
class RequirementRecord:
    project: str
    section: str
    req_id: str
    text: str
    label: Label = Label.UNLABELED

    def __post_init__(self) -> None:
        if not self.text.strip():
            raise ValueError(f"{self.project}/{self.req_id}: empty requirement text")

    @property
    def is_sec(self) -> bool:
        return self.label is Label.SEC


def check_unique(records: Iterable[RequirementRecord]) -> None:
    seen = set()
    for r in records:
        key = (r.project, r.req_id)
        if key in seen:
            raise ValueError(f"duplicate requirement {r.project}/{r.req_id}")
        seen.add(key)


def load_dataset(path) -> list[RequirementRecord]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != DATASET_HEADER:
            raise ValueError(f"{path}: header must be {','.join(DATASET_HEADER)}")
        records = []
        for row in reader:
            try:
                records.append(
                    RequirementRecord(
                        row["project"], row["section"], row["req_id"], row["text"], Label(row["label"] or "")
                    )
                )
            except ValueError as exc:
                raise ValueError(f"{path}:{reader.line_num}: {exc}") from None
    check_unique(records)
    return records


def dump_dataset(records: Iterable[RequirementRecord], fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(DATASET_HEADER)
    for r in records:
        writer.writerow([r.project, r.section, r.req_id, r.text, r.label.value])
