"""Integer kernels for batch distance work.

Trees are passed with weights scaled to integers (exact by scale invariance).
Each kernel has a numba version and a pure-numpy version returning identical
results; numba is used when importable unless ``PCGTOOLS_DISABLE_NUMBA=1``.
"""
from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is optional
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("PCGTOOLS_DISABLE_NUMBA", "") not in ("1", "true", "yes")
BACKEND = "numba" if USE_NUMBA else "numpy"


def _distance_matrix_py(parent, pw, order, leaves):
    N = parent.shape[0]
    depth = np.zeros(N, np.int64)
    level = np.zeros(N, np.int64)
    for idx in range(1, N):
        v = order[idx]
        p = parent[v]
        depth[v] = depth[p] + pw[v]
        level[v] = level[p] + 1
    n = leaves.shape[0]
    D = np.zeros((n, n), np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            a = leaves[i]
            b = leaves[j]
            while level[a] > level[b]:
                a = parent[a]
            while level[b] > level[a]:
                b = parent[b]
            while a != b:
                a = parent[a]
                b = parent[b]
            d = depth[leaves[i]] + depth[leaves[j]] - 2 * depth[a]
            D[i, j] = d
            D[j, i] = d
    return D


def _lemma_violations_py(D, limit):
    n = D.shape[0]
    out = np.empty((limit, 4), np.int64)
    k = 0
    for u in range(n):
        for v in range(n):
            if v == u:
                continue
            duv = D[u, v]
            for w in range(n):
                if w == u or w == v or duv < D[u, w] or duv < D[v, w]:
                    continue
                for x in range(n):
                    if x == u or x == v or x == w:
                        continue
                    dwx = D[w, x]
                    if dwx > D[u, x] and dwx > D[v, x]:
                        if k < limit:
                            out[k, 0] = u
                            out[k, 1] = v
                            out[k, 2] = w
                            out[k, 3] = x
                            k += 1
    return out[:k]


if HAVE_NUMBA:
    _distance_matrix_nb = njit(cache=True)(_distance_matrix_py)
    _lemma_violations_nb = njit(cache=True)(_lemma_violations_py)


def distance_matrix_numpy(parent, pw, order, leaves):
    """Leaf distances from an ancestor-indicator matrix: the path between two
    nodes is the symmetric difference of their root paths."""
    N = parent.shape[0]
    anc = np.zeros((N, N), np.bool_)
    for v in order:
        if parent[v] >= 0:
            anc[v] = anc[parent[v]]
        anc[v, v] = True
    L = anc[leaves]
    return ((L[:, None, :] ^ L[None, :, :]) * pw).sum(axis=-1).astype(np.int64)


def lemma_violations_numpy(D, limit):
    n = D.shape[0]
    duv = D[:, :, None, None]
    ok = (duv >= D[:, None, :, None]) & (duv >= D[None, :, :, None])
    dwx = D[None, None, :, :]
    bad = ok & (dwx > D[:, None, None, :]) & (dwx > D[None, :, None, :])
    i = np.arange(n)
    ne = i[:, None] != i[None, :]
    distinct = (
        ne[:, :, None, None] & ne[:, None, :, None] & ne[:, None, None, :]
        & ne[None, :, :, None] & ne[None, :, None, :] & ne[None, None, :, :]
    )
    return np.argwhere(bad & distinct)[:limit]


def _as_arrays(parent, pw, order, leaves):
    return (
        np.asarray(parent, np.int64),
        np.asarray(pw, np.int64),
        np.asarray(order, np.int64),
        np.asarray(leaves, np.int64),
    )


def leaf_distance_matrix(parent, pw, order, leaves, backend: str | None = None) -> np.ndarray:
    args = _as_arrays(parent, pw, order, leaves)
    if (backend or BACKEND) == "numba":
        return _distance_matrix_nb(*args)
    return distance_matrix_numpy(*args)


def lemma_violations(D: np.ndarray, limit: int = 10, backend: str | None = None) -> list[tuple[int, ...]]:
    D = np.asarray(D, np.int64)
    if D.shape[0] < 4:
        return []
    if (backend or BACKEND) == "numba":
        rows = _lemma_violations_nb(D, limit)
    else:
        rows = lemma_violations_numpy(D, limit)
    return [tuple(int(x) for x in r) for r in rows]
