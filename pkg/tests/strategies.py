"""Hypothesis strategies for assurance cases."""

from hypothesis import strategies as st

from cascade_sac.blocks import CascadeBlock
from cascade_sac.graph import Edge, EdgeKind, Node, NodeKind, build_case

single_line = st.text(
    alphabet=st.characters(blacklist_categories=("Cs",), blacklist_characters="\n\r"),
    max_size=40,
)
node_text = single_line.filter(bool)
_LETTERS = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz"
# same language as the casefile ident rule, built without the slower regex strategy
idents = st.builds(
    "".join,
    st.tuples(st.sampled_from(_LETTERS), st.text(alphabet=_LETTERS + "0123456789_.-", max_size=6)),
)

_ATTR_VALUES = {
    "covers": st.sampled_from(["RQ-01-01", "RQ-09-03,WP-15-01", "A1,B2,C3"]),
    "asset": idents,
    "about": idents,
    "item": idents,
    "cia": st.sampled_from("CIA"),
    "risk": st.sampled_from(["accept", "mitigate", "transfer"]),
}


# built once: constructing strategies inside a draw is slow
_KIND = st.sampled_from(list(NodeKind))
_BLOCK = st.none() | st.sampled_from(list(CascadeBlock))
_KEYS = st.sets(st.sampled_from(sorted(_ATTR_VALUES)))
_EDGE_KIND = st.sampled_from(list(EdgeKind))
_INDEX = st.integers(0, 10**6)


_NODE_FIELDS = st.tuples(_KIND, _BLOCK, _KEYS, st.booleans(), node_text)


def _draw_node(draw, node_id):
    kind, block, keys, undeveloped, text = draw(_NODE_FIELDS)
    attrs = {k: draw(_ATTR_VALUES[k]) for k in sorted(keys)}
    if kind is NodeKind.GOAL and undeveloped:
        attrs["undeveloped"] = "true"
    return Node(node_id, kind, text, block, attrs)


@st.composite
def cases(draw, max_nodes=12):
    """Cases that pass build_case (unique ids, edges between existing nodes)."""
    ids = draw(st.lists(idents, min_size=1, max_size=max_nodes, unique=True))
    ns = [_draw_node(draw, i) for i in ids]
    edges = set()
    if len(ids) > 1:
        pairs = st.tuples(_INDEX, _INDEX, _EDGE_KIND)
        for a, b, k in draw(st.lists(pairs, max_size=2 * len(ids))):
            s, t = ids[a % len(ids)], ids[b % len(ids)]
            if s != t:
                edges.add(Edge(s, t, k))
    order = draw(st.permutations(ns))
    return build_case(draw(single_line), order, sorted(edges, key=Edge.sort_key))


_RANKED = [
    CascadeBlock.WHITE_HAT_ASSETS,
    CascadeBlock.WHITE_HAT_DECOMP,
    CascadeBlock.WHITE_HAT_GOALS,
    CascadeBlock.BLACK_HAT_THREATS,
    CascadeBlock.BLACK_HAT_PATHS,
    CascadeBlock.RESOLVER_TREATMENT,
    CascadeBlock.RESOLVER_REQUIREMENTS,
]


@st.composite
def gsn_trees(draw, max_nodes=20, extra_edges=True, monotone=False):
    """Tree-shaped GSN cases rooted at a top claim, optionally with random extra edges.

    Many of these are structurally valid, some are not; useful for invariants
    conditioned on validity. ``monotone`` draws goal blocks whose rank never
    drops below the parent's, so CASCADE-valid cases are common.
    """
    level = {"N0": 0}
    ns = [Node("N0", NodeKind.GOAL, "top", CascadeBlock.TOP_CLAIM)]
    edges = []
    frontier = ["N0"]
    kinds = {"N0": NodeKind.GOAL}
    while frontier and len(ns) < max_nodes:
        parent = frontier.pop(0)
        n_children = draw(st.integers(0, 3))
        for _ in range(n_children):
            if len(ns) >= max_nodes:
                break
            nid = f"N{len(ns)}"
            if kinds[parent] is NodeKind.STRATEGY:
                kind = NodeKind.GOAL
            else:
                kind = draw(st.sampled_from([NodeKind.GOAL, NodeKind.STRATEGY, NodeKind.SOLUTION]))
            level[nid] = level[parent]
            if kind is NodeKind.GOAL and monotone:
                block = draw(st.sampled_from(_RANKED[max(0, level[parent] - 1):]))
                level[nid] = _RANKED.index(block) + 1
                attrs = {"undeveloped": "true"} if draw(st.booleans()) else {}
            elif kind is NodeKind.GOAL:
                block = draw(st.none() | st.sampled_from(_RANKED))
                attrs = {"undeveloped": "true"} if draw(st.booleans()) else {}
            elif kind is NodeKind.SOLUTION:
                block, attrs = CascadeBlock.EVIDENCE, {}
            else:
                block, attrs = None, {}
            ns.append(Node(nid, kind, f"text {nid}", block, attrs))
            kinds[nid] = kind
            edges.append(Edge(parent, nid, EdgeKind.SUPPORTED_BY))
            if kind is not NodeKind.SOLUTION:
                frontier.append(nid)
    if monotone:
        # close off leaves so that most trees are structurally sound
        parents = {e.source for e in edges}
        for i, n in enumerate(list(ns)):
            if n.id in parents:
                continue
            if n.kind is NodeKind.GOAL:
                ns[i] = Node(n.id, n.kind, n.text, n.block, {**n.attrs, "undeveloped": "true"})
            elif n.kind is NodeKind.STRATEGY:
                leaf = f"N{len(ns)}"
                block = _RANKED[max(0, level[n.id] - 1)]
                ns.append(Node(leaf, NodeKind.GOAL, f"text {leaf}", block, {"undeveloped": "true"}))
                edges.append(Edge(n.id, leaf, EdgeKind.SUPPORTED_BY))
    if extra_edges and len(ns) > 1:
        ids = [n.id for n in ns]
        for s, t in draw(st.lists(st.tuples(st.sampled_from(ids), st.sampled_from(ids)), max_size=3)):
            e = Edge(s, t, EdgeKind.SUPPORTED_BY) if s != t else None
            if e and e not in edges:
                edges.append(e)
    return build_case("tree", ns, edges)
