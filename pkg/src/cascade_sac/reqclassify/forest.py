"""Random forest of Gini-split binary decision trees.

Each tree owns a PRNG seeded from ``(seed, tree_index)`` so trees can be
grown in any order or in parallel and the forest comes out identical.
"""

from __future__ import annotations

import dataclasses
import json
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import numpy as np

from .text import FeatureSpace, vectorize

MODEL_VERSION = 1
POSITIVE_LABEL = "sec"
NEGATIVE_LABEL = "nonsec"

_TIE_EPS = 1e-12


@dataclasses.dataclass(frozen=True)
class ForestParams:
    n_trees: int = 100
    max_depth: Optional[int] = None
    min_samples_leaf: int = 1
    max_features_rule: str = "sqrt"
    seed: int = 42

    def __post_init__(self) -> None:
        if self.n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        if self.max_depth is not None and self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if self.min_samples_leaf < 1:
            raise ValueError("min_samples_leaf must be >= 1")
        if self.max_features_rule != "sqrt":
            raise ValueError("only the sqrt feature rule is supported")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


@dataclasses.dataclass(frozen=True)
class Tree:
    """Array-encoded tree; ``feature[i] == -1`` marks a leaf.

    Samples with ``x[feature] <= threshold`` go left.
    """

    feature: tuple[int, ...]
    threshold: tuple[float, ...]
    left: tuple[int, ...]
    right: tuple[int, ...]
    counts: tuple[tuple[int, int], ...]  # (nonsec, sec) training counts per node

    def leaf_votes(self, X: np.ndarray) -> np.ndarray:
        """1 where the reached leaf's majority is sec (ties vote nonsec)."""
        feature = np.asarray(self.feature)
        threshold = np.asarray(self.threshold)
        left = np.asarray(self.left)
        right = np.asarray(self.right)
        node = np.zeros(len(X), dtype=np.int64)
        active = feature[node] >= 0
        while active.any():
            idx = np.flatnonzero(active)
            f = feature[node[idx]]
            go_left = X[idx, f] <= threshold[node[idx]]
            node[idx] = np.where(go_left, left[node[idx]], right[node[idx]])
            active = feature[node] >= 0
        counts = np.asarray(self.counts).reshape(-1, 2)
        return (counts[node, 1] > counts[node, 0]).astype(np.int64)

    def to_dict(self) -> dict:
        return {
            "feature": list(self.feature),
            "threshold": list(self.threshold),
            "left": list(self.left),
            "right": list(self.right),
            "counts": [list(c) for c in self.counts],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Tree":
        return cls(
            tuple(int(v) for v in d["feature"]),
            tuple(float(v) for v in d["threshold"]),
            tuple(int(v) for v in d["left"]),
            tuple(int(v) for v in d["right"]),
            tuple((int(a), int(b)) for a, b in d["counts"]),
        )


@dataclasses.dataclass(frozen=True)
class ForestModel:
    params: ForestParams
    trees: tuple[Tree, ...]
    n_features: int
    positive_label: str = POSITIVE_LABEL

    def votes(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise ValueError(f"expected {self.n_features} features, got shape {X.shape}")
        return sum(t.leaf_votes(X) for t in self.trees)

    def scores(self, X: np.ndarray) -> np.ndarray:
        """Fraction of trees voting sec, per row."""
        return self.votes(X) / len(self.trees)

    def predict_labels(self, X: np.ndarray, threshold: float = 0.5) -> np.ndarray:
        return (self.scores(X) >= threshold).astype(np.int64)


def _best_split(Xn: np.ndarray, yn: np.ndarray, candidates: np.ndarray, min_leaf: int):
    n = len(yn)
    best = None  # (score, feature, threshold)
    for f in candidates:
        x = Xn[:, f]
        order = np.argsort(x, kind="stable")
        xs = x[order]
        pos = np.cumsum(yn[order])
        # split after position i-1 (left has i samples)
        i = np.arange(1, n)
        valid = (xs[1:] > xs[:-1]) & (i >= min_leaf) & (n - i >= min_leaf)
        if not valid.any():
            continue
        i = i[valid]
        left_pos = pos[i - 1]
        right_pos = pos[-1] - left_pos
        left_n, right_n = i, n - i
        gl = 1.0 - (left_pos / left_n) ** 2 - ((left_n - left_pos) / left_n) ** 2
        gr = 1.0 - (right_pos / right_n) ** 2 - ((right_n - right_pos) / right_n) ** 2
        score = (left_n * gl + right_n * gr) / n
        j = int(np.argmin(score))  # first minimum = lowest threshold
        s = float(score[j])
        lo, hi = xs[i[j] - 1], xs[i[j]]
        thr = float((lo + hi) / 2.0)
        if not lo <= thr < hi:  # adjacent floats: midpoint rounds up to hi
            thr = float(lo)
        cand = (s, int(f), thr)
        if best is None or s < best[0] - _TIE_EPS or (abs(s - best[0]) <= _TIE_EPS and cand[1:] < best[1:]):
            best = cand
    return best


def grow_tree(X: np.ndarray, y: np.ndarray, params: ForestParams, tree_index: int) -> Tree:
    """Grow one tree on a bootstrap sample drawn from the tree's own PRNG."""
    rng = np.random.default_rng([params.seed, tree_index])
    n, n_feat = X.shape
    m = max(1, math.ceil(math.sqrt(n_feat)))
    sample = rng.integers(0, n, n)

    feature: list[int] = []
    threshold: list[float] = []
    left: list[int] = []
    right: list[int] = []
    counts: list[tuple[int, int]] = []

    def new_node(idx: np.ndarray) -> int:
        pos = int(y[idx].sum())
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        counts.append((len(idx) - pos, pos))
        return len(feature) - 1

    stack = [(new_node(sample), sample, 0)]
    while stack:
        node, idx, depth = stack.pop()
        neg, pos = counts[node]
        if neg == 0 or pos == 0 or len(idx) < 2 * params.min_samples_leaf:
            continue
        if params.max_depth is not None and depth >= params.max_depth:
            continue
        Xn = X[idx]
        yn = y[idx]
        varying = Xn.max(axis=0) > Xn.min(axis=0)
        perm = rng.permutation(n_feat)
        candidates = perm[varying[perm]][:m]
        if len(candidates) == 0:
            continue
        best = _best_split(Xn, yn, candidates, params.min_samples_leaf)
        if best is None:
            continue
        _, f, thr = best
        go_left = Xn[:, f] <= thr
        li, ri = idx[go_left], idx[~go_left]
        feature[node], threshold[node] = f, thr
        left[node] = new_node(li)
        right[node] = new_node(ri)
        # right pushed first so the left subtree is expanded first
        stack.append((right[node], ri, depth + 1))
        stack.append((left[node], li, depth + 1))

    return Tree(tuple(feature), tuple(threshold), tuple(left), tuple(right), tuple(counts))


def train_forest(X, y, params: ForestParams = ForestParams(), n_jobs: int = 1) -> ForestModel:
    """Train a forest on rows ``X`` with binary labels ``y`` (1 = sec)."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or len(X) != len(y):
        raise ValueError("X must be 2-D with one label per row")
    if len(y) < 2:
        raise ValueError("need at least two samples")
    if set(np.unique(y).tolist()) != {0, 1}:
        raise ValueError("training data must contain both classes")
    indices = range(params.n_trees)
    if n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            trees = list(pool.map(lambda t: grow_tree(X, y, params, t), indices))
    else:
        trees = [grow_tree(X, y, params, t) for t in indices]
    return ForestModel(params, tuple(trees), X.shape[1])


def predict(model: ForestModel, fs: FeatureSpace, text: str, threshold: float = 0.5) -> tuple[str, float]:
    """Label one requirement text; returns (label, fraction of trees voting sec)."""
    if model.n_features != len(fs):
        raise ValueError(f"model expects {model.n_features} features, feature space has {len(fs)}")
    row = np.zeros((1, len(fs)))
    for i, v in vectorize(fs, text).items():
        row[0, i] = v
    score = float(model.scores(row)[0])
    return (POSITIVE_LABEL if score >= threshold else NEGATIVE_LABEL), score


def model_to_json(model: ForestModel, fs: FeatureSpace) -> str:
    if model.n_features != len(fs):
        raise ValueError("model and feature space dimensions differ")
    doc = {
        "version": MODEL_VERSION,
        "vocab": list(fs.vocab),
        "idf": list(fs.idf),
        "max_terms": fs.max_terms,
        "params": dataclasses.asdict(model.params),
        "trees": [t.to_dict() for t in model.trees],
        "positive_label": model.positive_label,
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def model_from_json(text: str) -> tuple[ForestModel, FeatureSpace]:
    doc = json.loads(text)
    if doc.get("version") != MODEL_VERSION:
        raise ValueError(f"unsupported model version {doc.get('version')!r}; expected {MODEL_VERSION}")
    if doc.get("positive_label") != POSITIVE_LABEL:
        raise ValueError("model positive_label must be 'sec'")
    vocab = tuple(doc["vocab"])
    fs = FeatureSpace(vocab, tuple(float(v) for v in doc["idf"]), int(doc.get("max_terms", max(len(vocab), 1))))
    params = ForestParams(**doc["params"])
    trees = tuple(Tree.from_dict(t) for t in doc["trees"])
    for t in trees:
        if any(f >= len(vocab) for f in t.feature):
            raise ValueError("tree references a feature outside the vocabulary")
    return ForestModel(params, trees, len(vocab)), fs
