"""GSN diagrams as Graphviz DOT text."""

from __future__ import annotations

import dataclasses
import re
import textwrap

from .blocks import CascadeBlock
from .graph import AssuranceCase, EdgeKind, Node, NodeKind

WRAP = 32

_BARE_ID = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_KEYWORDS = {"node", "edge", "graph", "digraph", "subgraph", "strict"}

_SHAPES = {
    NodeKind.GOAL: ("box", None),
    NodeKind.STRATEGY: ("parallelogram", None),
    NodeKind.SOLUTION: ("circle", None),
    NodeKind.CONTEXT: ("box", "rounded"),
    NodeKind.ASSUMPTION: ("ellipse", None),
}

_ARROWHEADS = {EdgeKind.SUPPORTED_BY: "normal", EdgeKind.IN_CONTEXT_OF: "empty"}


@dataclasses.dataclass(frozen=True)
class RenderOptions:
    show_blocks: bool = False
    rankdir: str = "TB"

    def __post_init__(self) -> None:
        if self.rankdir not in ("TB", "LR"):
            raise ValueError(f"rankdir must be TB or LR, not {self.rankdir!r}")


def dot_string(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def dot_id(s: str) -> str:
    if _BARE_ID.fullmatch(s) and s.lower() not in _KEYWORDS:
        return s
    return dot_string(s)


def _label(node: Node) -> str:
    lines = [node.id] + textwrap.wrap(node.text, WRAP, break_on_hyphens=False)
    label = "\n".join(lines)
    if node.kind is NodeKind.ASSUMPTION:
        label += " [A]"
    # DOT spells a line break inside a quoted label as backslash-n
    return dot_string(label).replace("\n", "\\n")


def _node_stmt(node: Node) -> str:
    shape, style = _SHAPES[node.kind]
    if node.kind is NodeKind.GOAL and node.undeveloped:
        style = "dashed"
    attrs = [f"shape={shape}"]
    if style:
        attrs.append(f"style={style}")
    attrs.append(f"label={_label(node)}")
    return f"{dot_id(node.id)} [{', '.join(attrs)}];"


def to_dot(case: AssuranceCase, opts: RenderOptions = RenderOptions()) -> str:
    """Deterministic DOT rendering; nodes in id order, edges in (source, target, relation) order."""
    out = [
        f"digraph {dot_string(case.name)} {{",
        f"  rankdir={opts.rankdir};",
        '  node [fontname="Helvetica", fontsize=10];',
    ]
    nodes = sorted(case.nodes, key=lambda n: n.id)
    if opts.show_blocks:
        loose = [n for n in nodes if n.block is None]
        for i, block in enumerate(b for b in CascadeBlock if any(n.block is b for n in nodes)):
            out.append(f"  subgraph cluster_{i} {{")
            out.append(f"    label={dot_string(block.value)};")
            out.extend(f"    {_node_stmt(n)}" for n in nodes if n.block is block)
            out.append("  }")
        out.extend(f"  {_node_stmt(n)}" for n in loose)
    else:
        out.extend(f"  {_node_stmt(n)}" for n in nodes)
    for e in sorted(case.edges, key=lambda e: e.sort_key()):
        out.append(f"  {dot_id(e.source)} -> {dot_id(e.target)} [arrowhead={_ARROWHEADS[e.kind]}];")
    out.append("}")
    return "\n".join(out) + "\n"
