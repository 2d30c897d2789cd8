"""SMOTE: synthetic minority oversampling."""

from __future__ import annotations

import numpy as np

DEFAULT_K = 5


def smote(X, y, k: int = DEFAULT_K, seed: int = 0, return_parents: bool = False):
    """Oversample the minority class until both classes have equal counts.

    Synthetic points are ``x + u * (nn - x)`` with ``x`` cycling through the
    minority rows in order, ``nn`` drawn uniformly from the ``k`` nearest
    minority neighbours of ``x`` (Euclidean, ties to the lower row) and
    ``u`` uniform on [0, 1). The input rows come first, unchanged, and the
    synthetic rows are appended.

    With ``return_parents=True`` also returns a list of ``(x_row, nn_row)``
    indices into ``X`` for each synthetic row.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    if X.ndim != 2 or len(X) != len(y):
        raise ValueError("X must be 2-D with one label per row")
    if k < 1:
        raise ValueError("k must be >= 1")
    classes, counts = np.unique(y, return_counts=True)
    if len(classes) != 2:
        raise ValueError(f"SMOTE needs exactly two classes, got {len(classes)}")

    parents: list[tuple[int, int]] = []
    if counts[0] == counts[1]:
        out = (X.copy(), y.copy())
        return (*out, parents) if return_parents else out

    minority = classes[int(np.argmin(counts))]
    rows = np.flatnonzero(y == minority)
    m = len(rows)
    need = int(counts.max() - counts.min())
    rng = np.random.default_rng(seed)
    P = X[rows]

    if m == 1:
        synth = np.repeat(P, need, axis=0)
        parents = [(int(rows[0]), int(rows[0]))] * need
    else:
        k_eff = min(k, m - 1)
        sq = (P * P).sum(axis=1)
        d2 = sq[:, None] + sq[None, :] - 2.0 * (P @ P.T)
        np.fill_diagonal(d2, np.inf)
        neighbours = np.argsort(d2, axis=1, kind="stable")[:, :k_eff]
        synth = np.empty((need, X.shape[1]))
        for j in range(need):
            base = j % m
            nn = neighbours[base, rng.integers(k_eff)]
            u = rng.random()
            synth[j] = P[base] + u * (P[nn] - P[base])
            parents.append((int(rows[base]), int(rows[nn])))

    X_out = np.vstack([X, synth])
    y_out = np.concatenate([y, np.full(need, minority, dtype=y.dtype)])
    if return_parents:
        return X_out, y_out, parents
    return X_out, y_out
