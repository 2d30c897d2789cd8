"""CASCADE semantics on top of the GSN graph.

Blocks order the argument top-down: top claim, white-hat (assets, their
decomposition, security goals), black-hat (threat scenarios, attack paths),
resolver (risk treatment, requirements) and finally evidence. Generic
sub-cases and quality claims sit outside that ordering.
"""

from __future__ import annotations

import dataclasses
import enum
from typing import Iterable, Optional

from .blocks import CascadeBlock, rank_of
from .findings import Finding, canonical
from .graph import AssuranceCase, EdgeKind, Node, NodeKind

__all__ = [
    "CascadeBlock",
    "rank_of",
    "SecurityProperty",
    "Asset",
    "RiskTreatment",
    "ClaimLevel",
    "validate_cascade",
    "derive_security_goals",
    "derive_counter_claims",
]


class SecurityProperty(enum.Enum):
    CONFIDENTIALITY = "C"
    INTEGRITY = "I"
    AVAILABILITY = "A"

    @property
    def title(self) -> str:
        return self.name.capitalize()


_CIA_ORDER = {p: i for i, p in enumerate(SecurityProperty)}


class RiskTreatment(str, enum.Enum):
    ACCEPT = "accept"
    MITIGATE = "mitigate"
    TRANSFER = "transfer"


class ClaimLevel(enum.Enum):
    THREATS = "threats"
    PATHS = "paths"


@dataclasses.dataclass(frozen=True)
class Asset:
    id: str
    name: str
    properties: frozenset = frozenset()
    # (target asset id, relation label); stored for documentation only
    relations: tuple = ()


def _generic_subtree(case: AssuranceCase) -> set[str]:
    members: set[str] = set()
    for n in case.of_kind(NodeKind.GOAL):
        if n.block is CascadeBlock.GENERIC:
            members.add(n.id)
            members |= case.descendants(n.id)
    return members


def _effective_ranks(case: AssuranceCase) -> dict[str, int]:
    ranks: dict[str, int] = {}
    for n in case.nodes:
        if n.kind is NodeKind.SOLUTION:
            ranks[n.id] = rank_of(CascadeBlock.EVIDENCE)
        elif n.kind is NodeKind.GOAL and n.block is not None:
            r = rank_of(n.block)
            if r is not None:
                ranks[n.id] = r
    for n in case.of_kind(NodeKind.STRATEGY):
        inherited = [ranks[p] for p in case.parents(n.id) if p in ranks]
        if inherited:
            ranks[n.id] = max(inherited)
    return ranks


def _generic_placement_ok(case: AssuranceCase, parent_id: str, top: Optional[str]) -> bool:
    parent = case[parent_id]
    if parent_id == top:
        return True
    if parent.kind is NodeKind.STRATEGY:
        grand = case.parents(parent_id)
        return bool(grand) and all(g == top for g in grand)
    return False


def validate_cascade(case: AssuranceCase) -> list[Finding]:
    """Block/level checks. Assumes :func:`validate_structure` found no errors."""
    findings: list[Finding] = []
    generic = _generic_subtree(case)
    roots = case.root_goals()
    top = roots[0] if len(roots) == 1 else None

    for n in case.nodes:
        if n.kind is NodeKind.SOLUTION:
            if n.block is not CascadeBlock.EVIDENCE:
                got = n.block.value if n.block else "none"
                findings.append(Finding("KIND_MISMATCH", n.id, f"solution must be in block evidence, got {got}"))
            continue
        if n.block is CascadeBlock.EVIDENCE:
            findings.append(Finding("KIND_MISMATCH", n.id, f"block evidence on a {n.kind.value}"))
        elif n.block is not None and n.block.is_quality and n.kind is not NodeKind.GOAL:
            findings.append(Finding("KIND_MISMATCH", n.id, f"quality block on a {n.kind.value}"))
        elif n.kind is NodeKind.STRATEGY and n.block is not None:
            findings.append(Finding("KIND_MISMATCH", n.id, "strategies take the level of their parent goal"))

        if n.kind is not NodeKind.GOAL:
            continue
        if n.block is None:
            if n.id not in generic:
                findings.append(Finding("UNKNOWN_BLOCK", n.id, "goal has no CASCADE block"))
            continue
        if n.block is CascadeBlock.TOP_CLAIM and n.id != top:
            findings.append(Finding("MISPLACED_BLOCK", n.id, "top_claim is reserved for the root goal"))
        if n.id == top and n.block is not CascadeBlock.TOP_CLAIM:
            findings.append(Finding("MISPLACED_BLOCK", n.id, f"root goal must be top_claim, got {n.block.value}"))
        if n.block is CascadeBlock.GENERIC:
            outside = [p for p in case.parents(n.id) if p not in generic]
            if not outside and n.id != top:
                continue
            for p in outside:
                if not _generic_placement_ok(case, p, top):
                    findings.append(
                        Finding("MISPLACED_BLOCK", n.id, f"generic sub-case under {p}; must hang beneath the top claim")
                    )

    ranks = _effective_ranks(case)
    for e in case.edges:
        if e.kind is not EdgeKind.SUPPORTED_BY:
            continue
        if e.source in generic or e.target in generic:
            continue
        parent_rank, child_rank = ranks.get(e.source), ranks.get(e.target)
        if parent_rank is None or child_rank is None:
            continue
        if child_rank < parent_rank:
            findings.append(
                Finding(
                    "LEVEL_INVERSION",
                    e.target,
                    f"{e.source} (level {parent_rank}) supported by {e.target} (level {child_rank})",
                )
            )
    return canonical(findings)


def check_assets(assets: Iterable[Asset]) -> None:
    assets = list(assets)
    ids = {a.id for a in assets}
    if len(ids) != len(assets):
        raise ValueError("asset ids must be unique")
    for a in assets:
        for target, _label in a.relations:
            if target not in ids:
                raise ValueError(f"asset {a.id}: relation to unknown asset {target!r}")


def derive_security_goals(assets: Iterable[Asset]) -> list[Node]:
    """One white-hat security-goal claim per (asset, CIA property)."""
    assets = list(assets)
    check_assets(assets)
    goals = []
    for a in sorted(assets, key=lambda a: a.id):
        if not a.properties:
            raise ValueError(f"asset {a.id} ({a.name}) has no security properties")
        for prop in sorted(a.properties, key=_CIA_ORDER.__getitem__):
            goals.append(
                Node(
                    id=f"SG.{a.id}.{prop.value}",
                    kind=NodeKind.GOAL,
                    text=f"Asset {a.name} preserves {prop.title}",
                    block=CascadeBlock.WHITE_HAT_GOALS,
                    attrs={"asset": a.id, "cia": prop.value},
                )
            )
    return goals


_LEVEL_INPUT = {
    ClaimLevel.THREATS: (CascadeBlock.WHITE_HAT_GOALS, CascadeBlock.BLACK_HAT_THREATS, "T"),
    ClaimLevel.PATHS: (CascadeBlock.BLACK_HAT_THREATS, CascadeBlock.BLACK_HAT_PATHS, "P"),
}


def derive_counter_claims(
    goal: Node,
    scenarios: Iterable[str],
    level: ClaimLevel,
    treatment: Optional[RiskTreatment] = None,
) -> list[Node]:
    """Black-hat claims negating each threat scenario or attack path of ``goal``.

    Threat claims hang below a security goal, path claims below a threat
    claim. With ``treatment`` the claims carry the chosen risk treatment.
    """
    expected, block, tag = _LEVEL_INPUT[level]
    if goal.kind is not NodeKind.GOAL or goal.block is not expected:
        raise ValueError(f"{level.value} claims must derive from a {expected.value} goal, not {goal.id}")
    claims = []
    for i, scenario in enumerate(scenarios, start=1):
        if not scenario.strip():
            raise ValueError(f"empty scenario #{i} for {goal.id}")
        if level is ClaimLevel.THREATS:
            text = f"Threat scenario '{scenario}' does not compromise {goal.text}"
        else:
            text = f"Attack path '{scenario}' is not realizable"
        attrs = {"risk": treatment.value} if treatment is not None else {}
        claims.append(Node(f"{goal.id}.{tag}{i}", NodeKind.GOAL, text, block, attrs))
    return claims
