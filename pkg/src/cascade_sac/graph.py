"""GSN assurance-case graph: node and edge taxonomy plus structural checks."""

from __future__ import annotations

import dataclasses
import enum
import functools
import re
from collections import defaultdict
from typing import Iterable, Mapping, Optional

from .blocks import CascadeBlock
from .findings import Finding, canonical

IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_.-]*")

ATTR_KEYS = ("covers", "asset", "cia", "risk", "about", "undeveloped", "item")


class NodeKind(str, enum.Enum):
    GOAL = "goal"
    STRATEGY = "strategy"
    SOLUTION = "solution"
    CONTEXT = "context"
    ASSUMPTION = "assumption"


class EdgeKind(str, enum.Enum):
    SUPPORTED_BY = "supported_by"
    IN_CONTEXT_OF = "in_context_of"


# (source kind, edge kind) -> permitted target kinds
LEGAL_EDGES = {
    (NodeKind.GOAL, EdgeKind.SUPPORTED_BY): {NodeKind.GOAL, NodeKind.STRATEGY, NodeKind.SOLUTION},
    (NodeKind.STRATEGY, EdgeKind.SUPPORTED_BY): {NodeKind.GOAL},
    (NodeKind.GOAL, EdgeKind.IN_CONTEXT_OF): {NodeKind.CONTEXT, NodeKind.ASSUMPTION},
    (NodeKind.STRATEGY, EdgeKind.IN_CONTEXT_OF): {NodeKind.CONTEXT, NodeKind.ASSUMPTION},
}

_ATTR_VALUE_RES = {
    "covers": re.compile(r"[A-Za-z0-9][A-Za-z0-9_.:/-]*(,[A-Za-z0-9][A-Za-z0-9_.:/-]*)*"),
    "asset": IDENT_RE,
    "about": IDENT_RE,
    "item": IDENT_RE,
    "cia": re.compile(r"[CIA]"),
    "risk": re.compile(r"accept|mitigate|transfer"),
    "undeveloped": re.compile(r"true"),
}


def attr_problem(key: str, value: str) -> Optional[str]:
    """Return a message if ``key=value`` is not a legal attribute, else None."""
    if key not in _ATTR_VALUE_RES:
        return f"unknown attribute key {key!r}"
    if not _ATTR_VALUE_RES[key].fullmatch(value):
        return f"invalid value {value!r} for attribute {key!r}"
    return None


@dataclasses.dataclass(frozen=True)
class Node:
    id: str
    kind: NodeKind
    text: str
    block: Optional[CascadeBlock] = None
    attrs: Mapping[str, str] = dataclasses.field(default_factory=dict)

    def __post_init__(self) -> None:
        if not IDENT_RE.fullmatch(self.id):
            raise ValueError(f"invalid node id {self.id!r}")
        if not self.text:
            raise ValueError(f"node {self.id}: text must be non-empty")
        if "\n" in self.text or "\r" in self.text:
            raise ValueError(f"node {self.id}: text must be a single line")
        for key, value in self.attrs.items():
            problem = attr_problem(key, value)
            if problem:
                raise ValueError(f"node {self.id}: {problem}")
        if "undeveloped" in self.attrs and self.kind is not NodeKind.GOAL:
            raise ValueError(f"node {self.id}: only goals may be undeveloped")
        object.__setattr__(self, "attrs", dict(self.attrs))

    @property
    def undeveloped(self) -> bool:
        return self.attrs.get("undeveloped") == "true"

    @property
    def covers(self) -> tuple[str, ...]:
        raw = self.attrs.get("covers")
        return tuple(raw.split(",")) if raw else ()


@dataclasses.dataclass(frozen=True)
class Edge:
    source: str
    target: str
    kind: EdgeKind

    def __post_init__(self) -> None:
        if self.source == self.target:
            raise ValueError(f"edge {self.source} -> {self.target}: self-loop")

    def sort_key(self) -> tuple[str, str, str]:
        return (self.source, self.target, self.kind.value)


@dataclasses.dataclass(frozen=True)
class AssuranceCase:
    """Immutable assurance case. Construct through :func:`build_case`."""

    name: str
    nodes: tuple[Node, ...]
    edges: tuple[Edge, ...]

    @functools.cached_property
    def by_id(self) -> dict[str, Node]:
        return {n.id: n for n in self.nodes}

    @functools.cached_property
    def _adjacency(self) -> tuple[dict, dict]:
        out: dict = defaultdict(list)
        inc: dict = defaultdict(list)
        for e in sorted(self.edges, key=Edge.sort_key):
            out[e.source, e.kind].append(e.target)
            inc[e.target, e.kind].append(e.source)
        return out, inc

    def __getitem__(self, node_id: str) -> Node:
        return self.by_id[node_id]

    def children(self, node_id: str, kind: EdgeKind = EdgeKind.SUPPORTED_BY) -> list[str]:
        return list(self._adjacency[0].get((node_id, kind), ()))

    def parents(self, node_id: str, kind: EdgeKind = EdgeKind.SUPPORTED_BY) -> list[str]:
        return list(self._adjacency[1].get((node_id, kind), ()))

    def of_kind(self, kind: NodeKind) -> list[Node]:
        return sorted((n for n in self.nodes if n.kind is kind), key=lambda n: n.id)

    def root_goals(self) -> list[str]:
        return [n.id for n in self.of_kind(NodeKind.GOAL) if not self.parents(n.id)]

    def descendants(self, node_id: str, kind: EdgeKind = EdgeKind.SUPPORTED_BY) -> set[str]:
        seen: set[str] = set()
        stack = self.children(node_id, kind)
        while stack:
            cur = stack.pop()
            if cur in seen:
                continue
            seen.add(cur)
            stack.extend(self.children(cur, kind))
        return seen

    def same_structure(self, other: "AssuranceCase") -> bool:
        """Order-insensitive equality of name, nodes and edges."""
        return (
            self.name == other.name
            and self.by_id == other.by_id
            and sorted(self.edges, key=Edge.sort_key) == sorted(other.edges, key=Edge.sort_key)
        )


class CaseBuildError(ValueError):
    def __init__(self, findings: list[Finding]):
        self.findings = findings
        super().__init__("; ".join(str(f) for f in findings))


def build_case(name: str, nodes: Iterable[Node], edges: Iterable[Edge]) -> AssuranceCase:
    """Assemble a case, checking id uniqueness and edge endpoints.

    Raises CaseBuildError carrying every violation as a Finding.
    """
    if "\n" in name or "\r" in name:
        raise ValueError("case name must be a single line")
    nodes = tuple(nodes)
    edges = tuple(edges)
    findings = []
    seen: dict[str, int] = defaultdict(int)
    for n in nodes:
        seen[n.id] += 1
    for node_id, count in seen.items():
        if count > 1:
            findings.append(Finding("DUPLICATE_ID", node_id, f"node id declared {count} times"))
    edge_count: dict[Edge, int] = defaultdict(int)
    for e in edges:
        edge_count[e] += 1
        for end in (e.source, e.target):
            if end not in seen:
                findings.append(
                    Finding("DANGLING_REF", end, f"edge {e.source} -> {e.target} references unknown node")
                )
    for e, count in edge_count.items():
        if count > 1:
            findings.append(Finding("DUPLICATE_EDGE", e.source, f"edge {e.source} -> {e.target} {e.kind.value} repeated"))
    if findings:
        raise CaseBuildError(canonical(findings))
    return AssuranceCase(name, nodes, edges)


def _cyclic_components(case: AssuranceCase) -> list[list[str]]:
    """Strongly connected components of size > 1 in the SupportedBy subgraph (Tarjan)."""
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    comps: list[list[str]] = []
    counter = 0
    for start in sorted(case.by_id):
        if start in index:
            continue
        work = [(start, iter(case.children(start)))]
        index[start] = low[start] = counter
        counter += 1
        stack.append(start)
        on_stack.add(start)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(case.children(w))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                if len(comp) > 1:
                    comps.append(sorted(comp))
    return comps


def validate_structure(case: AssuranceCase) -> list[Finding]:
    """Check GSN well-formedness; an empty list means the case is structurally sound."""
    findings: list[Finding] = []

    for comp in _cyclic_components(case):
        findings.append(Finding("CYCLE", comp[0], "supported_by cycle through " + ", ".join(comp)))

    roots = case.root_goals()
    if not roots:
        findings.append(Finding("NO_ROOT", case.name, "no goal without a supporting parent"))
    elif len(roots) > 1:
        for r in roots:
            findings.append(Finding("MULTI_ROOT", r, "one of several root goals: " + ", ".join(roots)))

    for e in case.edges:
        src, dst = case[e.source], case[e.target]
        if dst.kind not in LEGAL_EDGES.get((src.kind, e.kind), ()):
            findings.append(
                Finding(
                    "BAD_EDGE",
                    e.source,
                    f"{src.kind.value} {e.source} -> {dst.kind.value} {e.target} via {e.kind.value} is not allowed",
                )
            )

    if roots:
        reached = set(roots)
        for r in roots:
            reached |= case.descendants(r, EdgeKind.SUPPORTED_BY)
        for node_id in list(reached):
            reached.update(case.children(node_id, EdgeKind.IN_CONTEXT_OF))
        for n in case.nodes:
            if n.id not in reached:
                findings.append(Finding("UNREACHABLE", n.id, "not reachable from the root goal"))

    for n in case.nodes:
        if n.kind in (NodeKind.GOAL, NodeKind.STRATEGY) and not case.children(n.id):
            if n.kind is NodeKind.GOAL and n.undeveloped:
                continue
            findings.append(
                Finding("DEAD_END", n.id, f"{n.kind.value} has no support and is not marked undeveloped")
            )

    return canonical(findings)
