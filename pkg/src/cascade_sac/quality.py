"""Case quality assurance: completeness and confidence claims, standard coverage."""

from __future__ import annotations

import csv
import dataclasses
import enum
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable

from .blocks import CascadeBlock
from .cascade import validate_cascade
from .findings import Finding, canonical, has_errors
from .graph import AssuranceCase, Node, NodeKind, validate_structure


class ExpectedElement(str, enum.Enum):
    ASSUMPTION = "assumption"
    CLAIM = "claim"
    QUALITY_CLAIM = "quality-claim"
    QUALITY_EVIDENCE = "quality-evidence"
    CONTEXT = "context"
    EVIDENCE = "evidence"


class ClauseStatus(str, enum.Enum):
    COVERED = "covered"
    MISMATCHED = "mismatched"
    UNCOVERED = "uncovered"


@dataclasses.dataclass(frozen=True)
class StandardMapEntry:
    clause_id: str
    title: str
    expected: ExpectedElement


def percent_1dp(numerator: int, denominator: int) -> str:
    """100*n/d as a string with one decimal, rounding half up."""
    value = Decimal(100 * numerator) / Decimal(denominator)
    return str(value.quantize(Decimal("0.1"), rounding=ROUND_HALF_UP))


def _quality_claims(case: AssuranceCase, block: CascadeBlock) -> list[Node]:
    return [n for n in case.of_kind(NodeKind.GOAL) if n.block is block]


def _has_solution_below(case: AssuranceCase, node_id: str) -> bool:
    return any(case[d].kind is NodeKind.SOLUTION for d in case.descendants(node_id))


def _about_target(case: AssuranceCase, claim: Node, want: NodeKind) -> tuple[str | None, list[Finding]]:
    about = claim.attrs.get("about")
    if about is None:
        return None, [Finding("DANGLING_REF", claim.id, "quality claim has no about= reference")]
    if about not in case.by_id:
        return None, [Finding("DANGLING_REF", claim.id, f"about={about} names no node")]
    if case[about].kind is not want:
        return None, [
            Finding("KIND_MISMATCH", claim.id, f"about={about} is a {case[about].kind.value}, expected a {want.value}")
        ]
    return about, []


def check_completeness(case: AssuranceCase) -> list[Finding]:
    findings: list[Finding] = []
    covered: set[str] = set()
    for claim in _quality_claims(case, CascadeBlock.QUALITY_COMPLETENESS):
        target, problems = _about_target(case, claim, NodeKind.STRATEGY)
        findings.extend(problems)
        if target is not None:
            covered.add(target)
        if not claim.undeveloped and not _has_solution_below(case, claim.id):
            findings.append(Finding("UNSUPPORTED_COMPLETENESS_CLAIM", claim.id, "no supporting evidence"))
    for s in case.of_kind(NodeKind.STRATEGY):
        if s.id not in covered:
            findings.append(Finding("MISSING_COMPLETENESS", s.id, "strategy has no completeness claim"))
    return canonical(findings)


def evidence_backed_goals(case: AssuranceCase) -> list[str]:
    """Non-quality goals with at least one directly attached solution."""
    out = []
    for g in case.of_kind(NodeKind.GOAL):
        if g.block is not None and g.block.is_quality:
            continue
        if any(case[c].kind is NodeKind.SOLUTION for c in case.children(g.id)):
            out.append(g.id)
    return out


def check_confidence(case: AssuranceCase) -> list[Finding]:
    findings: list[Finding] = []
    covered: set[str] = set()
    for claim in _quality_claims(case, CascadeBlock.QUALITY_CONFIDENCE):
        target, problems = _about_target(case, claim, NodeKind.GOAL)
        findings.extend(problems)
        if target is not None:
            covered.add(target)
        if not _has_solution_below(case, claim.id):
            findings.append(Finding("UNSUPPORTED_QUALITY_CLAIM", claim.id, "confidence claim must be supported by evidence"))
    for g in evidence_backed_goals(case):
        if g not in covered:
            findings.append(Finding("MISSING_CONFIDENCE", g, "evidence-backed claim has no confidence claim"))
    return canonical(findings)


def check_argument_support(case: AssuranceCase) -> list[Finding]:
    """DEAD_END for goals and strategies whose only support is quality claims.

    Quality claims argue about the argument; they cannot stand in for it.
    """
    findings = []
    for n in case.nodes:
        if n.kind not in (NodeKind.GOAL, NodeKind.STRATEGY) or (n.block is not None and n.block.is_quality):
            continue
        kids = [case[c] for c in case.children(n.id)]
        if kids and all(k.block is not None and k.block.is_quality for k in kids):
            findings.append(Finding("DEAD_END", n.id, "supported only by quality claims"))
    return canonical(findings)


@dataclasses.dataclass(frozen=True)
class QualityReport:
    findings: tuple[Finding, ...]
    strategies_total: int
    strategies_with_completeness: int
    evidence_backed_claims: int
    claims_with_confidence: int
    undeveloped_goals: int
    solutions_total: int

    @property
    def metrics(self) -> dict[str, int]:
        return {
            f.name: getattr(self, f.name)
            for f in dataclasses.fields(self)
            if f.name != "findings"
        }

    @property
    def ok(self) -> bool:
        return not has_errors(self.findings)

    def to_dict(self) -> dict:
        return {"findings": [f.to_dict() for f in self.findings], "metrics": self.metrics}

    def to_text(self) -> str:
        lines = [str(f) for f in self.findings]
        errors = sum(f.is_error for f in self.findings)
        lines.append(f"{errors} error(s), {len(self.findings) - errors} warning(s)")
        lines.extend(f"{k}: {v}" for k, v in self.metrics.items())
        return "\n".join(lines) + "\n"


def _about_set(case: AssuranceCase, block: CascadeBlock) -> set[str]:
    return {n.attrs["about"] for n in _quality_claims(case, block) if "about" in n.attrs}


def quality_summary(case: AssuranceCase) -> QualityReport:
    """Run every case check and count quality metrics.

    Level, completeness and confidence rules presuppose a well-formed graph,
    so they are skipped when the structural check reports errors.
    """
    findings = list(validate_structure(case))
    if not has_errors(findings):
        findings += validate_cascade(case)
        findings += check_argument_support(case)
        findings += check_completeness(case)
        findings += check_confidence(case)

    strategies = {s.id for s in case.of_kind(NodeKind.STRATEGY)}
    backed = set(evidence_backed_goals(case))
    return QualityReport(
        findings=tuple(canonical(findings)),
        strategies_total=len(strategies),
        strategies_with_completeness=len(strategies & _about_set(case, CascadeBlock.QUALITY_COMPLETENESS)),
        evidence_backed_claims=len(backed),
        claims_with_confidence=len(backed & _about_set(case, CascadeBlock.QUALITY_CONFIDENCE)),
        undeveloped_goals=sum(g.undeveloped for g in case.of_kind(NodeKind.GOAL)),
        solutions_total=len(case.of_kind(NodeKind.SOLUTION)),
    )


# ---------------------------------------------------------------- coverage

def load_standard_map(path) -> list[StandardMapEntry]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["clause_id", "title", "expected"]:
            raise ValueError(f"{path}: header must be clause_id,title,expected")
        entries = []
        for row in reader:
            try:
                expected = ExpectedElement(row["expected"])
            except ValueError:
                raise ValueError(f"{path}:{reader.line_num}: unknown expected element {row['expected']!r}") from None
            entries.append(StandardMapEntry(row["clause_id"], row["title"], expected))
    return entries


def element_kinds(case: AssuranceCase, node: Node) -> set[ExpectedElement]:
    """The standard-map element kinds a node can satisfy."""
    if node.kind is NodeKind.GOAL:
        quality = node.block is not None and node.block.is_quality
        return {ExpectedElement.QUALITY_CLAIM if quality else ExpectedElement.CLAIM}
    if node.kind is NodeKind.SOLUTION:
        kinds = {ExpectedElement.EVIDENCE}
        for p in case.parents(node.id):
            block = case[p].block
            if block is not None and block.is_quality:
                kinds.add(ExpectedElement.QUALITY_EVIDENCE)
        return kinds
    if node.kind is NodeKind.CONTEXT:
        return {ExpectedElement.CONTEXT}
    if node.kind is NodeKind.ASSUMPTION:
        return {ExpectedElement.ASSUMPTION}
    return set()


@dataclasses.dataclass(frozen=True)
class ClauseCoverage:
    clause_id: str
    title: str
    expected: ExpectedElement
    status: ClauseStatus
    # matching nodes when covered, otherwise the wrong-kind carriers
    nodes: tuple[str, ...]


@dataclasses.dataclass(frozen=True)
class CoverageReport:
    clauses: tuple[ClauseCoverage, ...]

    def count(self, status: ClauseStatus) -> int:
        return sum(c.status is status for c in self.clauses)

    @property
    def total(self) -> int:
        return len(self.clauses)

    @property
    def covered(self) -> int:
        return self.count(ClauseStatus.COVERED)

    @property
    def ratio(self) -> str:
        return f"{self.covered}/{self.total}"

    @property
    def percent(self) -> str:
        return percent_1dp(self.covered, self.total)

    @property
    def findings(self) -> list[Finding]:
        return canonical(
            Finding("UNCOVERED_CLAUSE", c.clause_id, f"{c.status.value}: expected {c.expected.value}")
            for c in self.clauses
            if c.status is not ClauseStatus.COVERED
        )

    def to_dict(self) -> dict:
        return {
            "clauses": [
                {
                    "clause_id": c.clause_id,
                    "title": c.title,
                    "expected": c.expected.value,
                    "status": c.status.value,
                    "nodes": list(c.nodes),
                }
                for c in self.clauses
            ],
            "summary": {
                "covered": self.covered,
                "mismatched": self.count(ClauseStatus.MISMATCHED),
                "uncovered": self.count(ClauseStatus.UNCOVERED),
                "total": self.total,
                "ratio": self.ratio,
                "percent": self.percent,
            },
        }

    def to_text(self) -> str:
        width = max(len(c.clause_id) for c in self.clauses)
        lines = []
        for c in self.clauses:
            nodes = ",".join(c.nodes) or "-"
            lines.append(f"{c.clause_id:<{width}}  {c.status.value:<10}  {c.expected.value:<16}  {nodes}")
        lines.append(
            f"covered {self.ratio} ({self.percent}%), mismatched {self.count(ClauseStatus.MISMATCHED)}, "
            f"uncovered {self.count(ClauseStatus.UNCOVERED)}"
        )
        return "\n".join(lines) + "\n"


def coverage_report(case: AssuranceCase, entries: Iterable[StandardMapEntry]) -> CoverageReport:
    """Which standard clauses the case addresses with the right element kind."""
    entries = list(entries)
    if not entries:
        raise ValueError("standard map is empty")
    seen: set[str] = set()
    for e in entries:
        if e.clause_id in seen:
            raise ValueError(f"duplicate clause id {e.clause_id!r} in standard map")
        seen.add(e.clause_id)

    carriers: dict[str, list[Node]] = {}
    for n in sorted(case.nodes, key=lambda n: n.id):
        for clause in n.covers:
            carriers.setdefault(clause, []).append(n)

    rows = []
    for e in entries:
        carrying = carriers.get(e.clause_id, [])
        matching = [n.id for n in carrying if e.expected in element_kinds(case, n)]
        if matching:
            rows.append(ClauseCoverage(e.clause_id, e.title, e.expected, ClauseStatus.COVERED, tuple(matching)))
        elif carrying:
            rows.append(
                ClauseCoverage(
                    e.clause_id, e.title, e.expected, ClauseStatus.MISMATCHED, tuple(n.id for n in carrying)
                )
            )
        else:
            rows.append(ClauseCoverage(e.clause_id, e.title, e.expected, ClauseStatus.UNCOVERED, ()))
    return CoverageReport(tuple(rows))
