import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cascade_sac.reqclassify.forest import (
    ForestModel,
    ForestParams,
    Tree,
    _best_split,
    grow_tree,
    model_from_json,
    model_to_json,
    predict,
    train_forest,
)
from cascade_sac.reqclassify.text import fit_feature_space, transform


def stump(vote_sec: bool) -> Tree:
    counts = (0, 1) if vote_sec else (1, 0)
    return Tree((-1,), (0.0,), (-1,), (-1,), (counts,))


def forest_of(trees, n_features=1):
    return ForestModel(ForestParams(n_trees=len(trees)), tuple(trees), n_features)


def test_separable_one_feature():
    x = np.linspace(0, 1, 21)
    X = x[:, None]
    y = (x >= 0.5).astype(int)
    model = train_forest(X, y, ForestParams(n_trees=15, seed=1))
    assert np.array_equal(model.predict_labels(X), y)


def test_xor_stump_cannot_fit():
    X = np.array([[0, 0], [0, 1], [1, 0], [1, 1]] * 5, dtype=float)
    y = np.array([0, 1, 1, 0] * 5)
    for seed in range(20):
        model = train_forest(X, y, ForestParams(n_trees=1, max_depth=1, seed=seed))
        assert (model.predict_labels(X) == y).mean() <= 0.75


def test_deterministic_and_parallel_identical():
    rng = np.random.default_rng(5)
    X = rng.random((60, 7))
    y = (X[:, 2] + 0.3 * rng.random(60) > 0.6).astype(int)
    fs = fit_feature_space([" ".join(f"t{i}" for i in range(7))], 10)
    params = ForestParams(n_trees=12, seed=9)
    a = model_to_json(train_forest(X, y, params), fs)
    assert a == model_to_json(train_forest(X, y, params), fs)
    assert a == model_to_json(train_forest(X, y, params, n_jobs=4), fs)
    assert a != model_to_json(train_forest(X, y, ForestParams(n_trees=12, seed=10)), fs)


def test_vote_scores_and_threshold():
    model = forest_of([stump(True), stump(True), stump(False)])
    assert model.scores(np.zeros((1, 1)))[0] == pytest.approx(2 / 3)
    assert model.predict_labels(np.zeros((1, 1)))[0] == 1
    half = forest_of([stump(True), stump(False)])
    assert half.predict_labels(np.zeros((1, 1)))[0] == 1  # score 0.5 meets the >= rule
    assert half.predict_labels(np.zeros((1, 1)), threshold=0.51)[0] == 0


def test_leaf_count_tie_votes_nonsec():
    tie = Tree((-1,), (0.0,), (-1,), (-1,), ((2, 2),))
    assert tie.leaf_votes(np.zeros((1, 1)))[0] == 0


def test_tree_routing():
    # x0 <= 0.5 goes left (nonsec leaf), otherwise right (sec leaf)
    t = Tree((0, -1, -1), (0.5, 0.0, 0.0), (1, -1, -1), (2, -1, -1), ((2, 2), (2, 0), (0, 2)))
    assert list(t.leaf_votes(np.array([[0.5], [0.50001], [0.0]]))) == [0, 1, 0]


def test_predict_oov_traces_tree_roots():
    texts = ["encrypt the key", "encrypt data", "show the map", "show speed", "log speed", "encrypt log"]
    y = np.array([1, 1, 0, 0, 0, 1])
    fs = fit_feature_space(texts, 50)
    model = train_forest(transform(fs, texts), y, ForestParams(n_trees=9, seed=3))
    label, score = predict(model, fs, "zzz qqq")
    # oracle: walk each tree by hand with the all-zero vector
    votes = 0
    for t in model.trees:
        node = 0
        while t.feature[node] >= 0:
            node = t.left[node] if 0.0 <= t.threshold[node] else t.right[node]
        neg, pos = t.counts[node]
        votes += pos > neg
    assert score == votes / 9
    assert label == ("sec" if votes / 9 >= 0.5 else "nonsec")


def test_dimension_mismatch():
    fs = fit_feature_space(["a1 b1"], 10)
    with pytest.raises(ValueError):
        predict(forest_of([stump(True)], n_features=3), fs, "a1")
    with pytest.raises(ValueError):
        forest_of([stump(True)], 3).scores(np.zeros((1, 2)))


def test_training_errors():
    with pytest.raises(ValueError):
        train_forest(np.zeros((3, 1)), np.array([1, 1, 1]))
    with pytest.raises(ValueError):
        train_forest(np.zeros((1, 1)), np.array([1]))
    with pytest.raises(ValueError):
        ForestParams(n_trees=0)


def test_json_round_trip_and_version():
    texts = ["encrypt key", "show map", "encrypt data", "show speed"]
    fs = fit_feature_space(texts, 10)
    model = train_forest(transform(fs, texts), np.array([1, 0, 1, 0]), ForestParams(n_trees=3))
    text = model_to_json(model, fs)
    doc = json.loads(text)
    assert doc["version"] == 1 and doc["positive_label"] == "sec"
    assert set(doc) >= {"vocab", "idf", "params", "trees"}
    m2, fs2 = model_from_json(text)
    assert model_to_json(m2, fs2) == text
    doc["version"] = 2
    with pytest.raises(ValueError, match="version"):
        model_from_json(json.dumps(doc))


def test_feature_indices_within_vocab():
    rng = np.random.default_rng(1)
    X = rng.random((40, 9))
    y = (X[:, 0] > 0.5).astype(int)
    model = train_forest(X, y, ForestParams(n_trees=5))
    assert all(f < 9 for t in model.trees for f in t.feature)


def gini_oracle(X, y, candidates, min_leaf):
    """Brute force over every feature and midpoint threshold."""
    best = None
    n = len(y)
    for f in sorted(candidates):
        values = sorted(set(X[:, f].tolist()))
        for lo, hi in zip(values, values[1:]):
            thr = (lo + hi) / 2
            left = y[X[:, f] <= thr]
            right = y[X[:, f] > thr]
            if len(left) < min_leaf or len(right) < min_leaf:
                continue

            def g(part):
                p = part.mean()
                return 1 - p * p - (1 - p) ** 2

            score = (len(left) * g(left) + len(right) * g(right)) / n
            if best is None or score < best[0] - 1e-12:
                best = (score, f, thr)
    return best


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 12), st.integers(1, 4), st.integers(1, 3))
def test_best_split_matches_brute_force(seed, n, d, min_leaf):
    rng = np.random.default_rng(seed)
    X = rng.integers(0, 4, size=(n, d)).astype(float) / 3
    y = rng.integers(0, 2, size=n)
    got = _best_split(X, y, np.arange(d), min_leaf)
    want = gini_oracle(X, y, range(d), min_leaf)
    if want is None:
        assert got is None
    else:
        assert got[1:] == want[1:]
        assert got[0] == pytest.approx(want[0], abs=1e-12)


def test_tie_prefers_lowest_feature():
    X = np.array([[0.0, 0.0], [1.0, 1.0]])
    y = np.array([0, 1])
    assert _best_split(X, y, np.array([1, 0]), 1)[1:] == (0, 0.5)


def test_tree_order_independent():
    rng = np.random.default_rng(2)
    X = rng.random((30, 4))
    y = (X[:, 1] > 0.4).astype(int)
    params = ForestParams(n_trees=4, seed=7)
    forward = [grow_tree(X, y, params, i) for i in range(4)]
    backward = [grow_tree(X, y, params, i) for i in reversed(range(4))][::-1]
    assert forward == backward
