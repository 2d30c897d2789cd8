"""Bag-of-words tokenization and TF-IDF features."""

from __future__ import annotations

import dataclasses
import math
import re
from collections import Counter
from typing import Iterable, Sequence

import numpy as np

_WORD = re.compile(r"[^\W_]+")

DEFAULT_MAX_TERMS = 2000


def tokenize(text: str) -> list[str]:
    """Lowercase alphanumeric runs of length >= 2, in order, duplicates kept."""
    return [t for t in _WORD.findall(text.lower()) if len(t) >= 2]


@dataclasses.dataclass(frozen=True)
class FeatureSpace:
    vocab: tuple[str, ...]
    idf: tuple[float, ...]
    max_terms: int = DEFAULT_MAX_TERMS

    def __post_init__(self) -> None:
        if len(self.vocab) != len(self.idf):
            raise ValueError("vocab and idf lengths differ")
        if len(self.vocab) > self.max_terms:
            raise ValueError("vocabulary exceeds max_terms")

    @property
    def index(self) -> dict[str, int]:
        return {t: i for i, t in enumerate(self.vocab)}

    def __len__(self) -> int:
        return len(self.vocab)


def fit_feature_space(texts: Iterable[str], max_terms: int = DEFAULT_MAX_TERMS) -> FeatureSpace:
    """Vocabulary of the ``max_terms`` most document-frequent terms with smoothed idf.

    idf(t) = ln((1 + N) / (1 + df(t))) + 1
    """
    texts = list(texts)
    if not texts:
        raise ValueError("cannot fit a feature space on zero documents")
    if max_terms < 1:
        raise ValueError("max_terms must be positive")
    df: Counter = Counter()
    for text in texts:
        df.update(set(tokenize(text)))
    ranked = sorted(df.items(), key=lambda kv: (-kv[1], kv[0]))[:max_terms]
    n = len(texts)
    vocab = tuple(t for t, _ in ranked)
    idf = tuple(math.log((1 + n) / (1 + d)) + 1.0 for _, d in ranked)
    return FeatureSpace(vocab, idf, max_terms)


def vectorize(fs: FeatureSpace, text: str, index: dict[str, int] | None = None) -> dict[int, float]:
    """Sparse L2-normalized tf*idf vector; out-of-vocabulary terms are ignored."""
    index = fs.index if index is None else index
    counts = Counter(index[t] for t in tokenize(text) if t in index)
    raw = {i: c * fs.idf[i] for i, c in counts.items()}
    norm = math.sqrt(sum(v * v for v in raw.values()))
    if norm == 0.0:
        return {}
    return {i: v / norm for i, v in sorted(raw.items())}


def transform(fs: FeatureSpace, texts: Sequence[str]) -> np.ndarray:
    """Dense (n_texts, n_terms) matrix of :func:`vectorize` rows."""
    index = fs.index
    X = np.zeros((len(texts), len(fs)), dtype=np.float64)
    for row, text in enumerate(texts):
        for i, v in vectorize(fs, text, index).items():
            X[row, i] = v
    return X
