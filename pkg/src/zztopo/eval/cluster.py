"""Scaling, PCA and Ward agglomeration with fixed conventions."""

from __future__ import annotations

import numpy as np


def minmax_fit(X):
    X = np.asarray(X, dtype=float)
    lo = X.min(axis=0)
    span = X.max(axis=0) - lo
    return lo, span


def minmax_scale(X, ref=None) -> np.ndarray:
    """Per-feature affine map to [0, 1] using the range of ``ref`` (default X).

    Constant features map to 0.  Rows outside the reference range are not clipped.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError("X must be 2-D")
    lo, span = minmax_fit(X if ref is None else ref)
    ok = span > 0
    return np.where(ok, (X - lo) / np.where(ok, span, 1.0), 0.0)


def pca_fit(X, d: int = 10):
    """Mean and (d, D) principal axes, ordered by variance.

    Each axis is signed so that its largest-magnitude loading is positive
    (first such entry on exact ties).
    """
    X = np.asarray(X, dtype=float)
    N, D = X.shape
    if N < 2:
        raise ValueError("PCA needs at least 2 rows")
    if not 1 <= d <= min(N - 1, D):
        raise ValueError(f"d={d} must be in 1..min(N-1, D)={min(N - 1, D)}")
    mu = X.mean(axis=0)
    _, _, vt = np.linalg.svd(X - mu, full_matrices=False)
    comps = vt[:d].copy()
    idx = np.argmax(np.abs(comps), axis=1)
    sign = np.sign(comps[np.arange(d), idx])
    comps *= np.where(sign == 0, 1.0, sign)[:, None]
    return mu, comps


def pca_project(X, d: int = 10) -> np.ndarray:
    mu, comps = pca_fit(X, d)
    return (np.asarray(X, dtype=float) - mu) @ comps.T


def ward_linkage(X) -> np.ndarray:
    """Merge table (N-1, 4): id_a, id_b, increase, size, with id_a < id_b.

    Leaves are 0..N-1 and the cluster created at step s is N+s.  Distances
    follow the Lance-Williams update on squared Euclidean distances; among
    equal candidates the pair with the smallest (min id, max id) is merged.
    """
    X = np.asarray(X, dtype=float)
    N = len(X)
    sq = (X * X).sum(axis=1)
    D = np.maximum(sq[:, None] + sq[None, :] - 2 * X @ X.T, 0.0)
    np.fill_diagonal(D, np.inf)
    ids = np.arange(N)
    size = np.ones(N)
    alive = np.ones(N, dtype=bool)
    out = np.zeros((max(N - 1, 0), 4))
    for step in range(N - 1):
        m = D.min()
        ci, cj = np.nonzero(D == m)
        keep = ci < cj
        ci, cj = ci[keep], cj[keep]
        lo = np.minimum(ids[ci], ids[cj])
        hi = np.maximum(ids[ci], ids[cj])
        best = np.lexsort((hi, lo))[0]
        i, j = ci[best], cj[best]
        ni, nj = size[i], size[j]
        out[step] = (lo[best], hi[best], m, ni + nj)
        nk = size
        new = ((ni + nk) * D[i] + (nj + nk) * D[j] - nk * m) / (ni + nj + nk)
        new[~alive] = np.inf
        D[i, :] = new
        D[:, i] = new
        D[i, i] = np.inf
        D[j, :] = np.inf
        D[:, j] = np.inf
        alive[j] = False
        size[i] = ni + nj
        ids[i] = N + step
    return out


def cut_tree(merges: np.ndarray, N: int, k: int) -> np.ndarray:
    """Labels after the first N-k merges; cluster labels ordered by smallest member."""
    parent = np.arange(2 * N)
    for s in range(N - k):
        a, b = int(merges[s, 0]), int(merges[s, 1])
        parent[a] = N + s
        parent[b] = N + s
    root = np.arange(N)
    for i in range(N):
        r = i
        while parent[r] != r:
            r = parent[r]
        root[i] = r
    _, first = np.unique(root, return_index=True)
    order = np.argsort(first)
    relabel = {root[first[o]]: lab for lab, o in enumerate(order)}
    return np.array([relabel[r] for r in root])


def ward_cluster(X, k: int) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    N = len(X)
    if not 1 <= k <= N:
        raise ValueError(f"k={k} must be in 1..{N}")
    return cut_tree(ward_linkage(X), N, k)
