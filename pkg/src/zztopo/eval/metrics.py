"""Partition agreement scores and classification summaries."""

from __future__ import annotations

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.special import gammaln


def _pair(a, b):
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("label vectors must be 1-D and of equal length")
    return a, b


def contingency(a, b) -> np.ndarray:
    a, b = _pair(a, b)
    _, ia = np.unique(a, return_inverse=True)
    _, ib = np.unique(b, return_inverse=True)
    c = np.zeros((ia.max(initial=-1) + 1, ib.max(initial=-1) + 1), dtype=np.int64)
    np.add.at(c, (ia, ib), 1)
    return c


def _comb2(x) -> int:
    return sum(int(v) * (int(v) - 1) // 2 for v in np.ravel(x))


def ari(a, b) -> float:
    """Adjusted Rand index, computed in exact integer arithmetic up to the final division."""
    c = contingency(a, b)
    n = int(c.sum())
    index = _comb2(c)
    sa = _comb2(c.sum(axis=1))
    sb = _comb2(c.sum(axis=0))
    total = n * (n - 1) // 2
    num = 2 * (index * total - sa * sb)
    den = (sa + sb) * total - 2 * sa * sb
    if den == 0:
        return 1.0
    return num / den


def _entropy(counts) -> float:
    counts = np.asarray(counts, dtype=float)
    counts = counts[counts > 0]
    n = counts.sum()
    p = counts / n
    return float(-(p * np.log(p)).sum())


def mutual_info(c: np.ndarray) -> float:
    n = c.sum()
    nz = c > 0
    pij = c[nz] / n
    a = c.sum(axis=1, keepdims=True)
    b = c.sum(axis=0, keepdims=True)
    outer = (a @ b)[nz] / n**2
    return float((pij * (np.log(pij) - np.log(outer))).sum())


def expected_mutual_info(c: np.ndarray) -> float:
    """E[MI] under the hypergeometric model with the margins of ``c``."""
    N = int(c.sum())
    a = c.sum(axis=1).astype(int)
    b = c.sum(axis=0).astype(int)
    gN = gammaln(N + 1)
    emi = 0.0
    for ai in a:
        for bj in b:
            lo = max(1, ai + bj - N)
            hi = min(ai, bj)
            if lo > hi:
                continue
            nij = np.arange(lo, hi + 1, dtype=float)
            term = nij / N * (np.log(N * nij) - np.log(float(ai) * bj))
            logp = (gammaln(ai + 1) + gammaln(bj + 1) + gammaln(N - ai + 1) + gammaln(N - bj + 1)
                    - gN - gammaln(nij + 1) - gammaln(ai - nij + 1) - gammaln(bj - nij + 1)
                    - gammaln(N - ai - bj + nij + 1))
            emi += float((term * np.exp(logp)).sum())
    return emi


def ami(a, b) -> float:
    """Adjusted mutual information with arithmetic-mean normalization."""
    c = contingency(a, b)
    ka, kb = c.shape
    if ka == kb == 1 or ka == kb == 0:
        return 1.0
    if ka == 1 or kb == 1:
        return 0.0
    if ka == kb == np.count_nonzero(c):
        return 1.0  # same partition; skip the rounding of the general formula
    mi = mutual_info(c)
    emi = expected_mutual_info(c)
    ha = _entropy(c.sum(axis=1))
    hb = _entropy(c.sum(axis=0))
    den = 0.5 * (ha + hb) - emi
    eps = np.finfo(float).eps
    # keep signs and avoid 0/0 when the expectation equals the maximum
    den = min(den, -eps) if den < 0 else max(den, eps)
    num = mi - emi
    num = min(num, -eps) if num < 0 else max(num, eps)
    return float(num / den)


def matched_accuracy(pred, truth) -> float:
    """Best fraction of agreement over one-to-one cluster/class matchings."""
    c = contingency(pred, truth)
    if c.size == 0:
        return 1.0
    r, k = linear_sum_assignment(c, maximize=True)
    return float(c[r, k].sum() / c.sum())


def confusion_matrix(truth, pred, n_classes: int) -> np.ndarray:
    m = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(m, (np.asarray(truth), np.asarray(pred)), 1)
    return m


def f1_per_class(cm: np.ndarray):
    """(f1, support) per class from a truth x prediction confusion matrix."""
    tp = np.diag(cm).astype(float)
    support = cm.sum(axis=1)
    predicted = cm.sum(axis=0)
    with np.errstate(invalid="ignore", divide="ignore"):
        f1 = np.where(support + predicted > 0, 2 * tp / (support + predicted), 0.0)
    return f1, support
