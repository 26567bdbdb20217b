"""Repeat clustering (protocol A) and stratified classification (protocols B and C)."""

from __future__ import annotations

from collections import Counter
from dataclasses import asdict, dataclass, field

import numpy as np

from .cluster import minmax_scale, pca_project, ward_cluster
from .logreg import logreg_fit, logreg_predict
from .metrics import ami, ari, confusion_matrix, f1_per_class, matched_accuracy


@dataclass
class ClusterReport:
    ari_mean: float
    ari_std: float
    ami_mean: float
    ami_std: float
    acc_mean: float
    acc_std: float
    runs: int
    classes: list[str]
    per_class: int
    per_run: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class ClassifyReport:
    target: str
    classes: list[str]
    cv_accuracy_mean: float
    cv_accuracy_std: float
    split_accuracy: list[float]
    f1: list[float]
    f1_support: list[int]
    confusion: list[list[int]]

    def to_dict(self) -> dict:
        return asdict(self)


def _stack(descriptors):
    return np.stack([np.asarray(d.vector, dtype=float) for d in descriptors])


def protocol_A(descriptors, mouse=None, video_type=None, runs: int = 20, per_class: int = 10,
               seed: int = 0, d: int = 10) -> ClusterReport:
    """Cluster balanced resamples of repeat trials and score against video identity.

    Classes are repeat groups of the selected mouse and video type.  Each
    run draws the same number of repeats per class, scales to [0, 1], fits
    PCA on the drawn set and cuts a Ward tree at the number of classes.
    """
    sel = [x for x in descriptors
           if (mouse is None or x.mouse_id == mouse) and (video_type is None or x.video_type == video_type)]
    counts = Counter(x.group for x in sel)
    classes = sorted(counts)
    short = sorted(g for g, c in counts.items() if c < 2)
    if short:
        raise ValueError(f"videos with fewer than 2 repeats: {', '.join(short)}")
    if len(classes) < 2:
        raise ValueError(f"need at least 2 videos with repeats, found {len(classes)}")
    m = min(per_class, min(counts.values()))
    X = _stack(sel)
    y = np.array([classes.index(x.group) for x in sel])
    by_class = [np.flatnonzero(y == c) for c in range(len(classes))]
    rng = np.random.default_rng(seed)
    scores = []
    for r in range(runs):
        idx = np.concatenate([rng.choice(ix, size=m, replace=False) for ix in by_class])
        idx = idx[rng.permutation(len(idx))]
        Z = minmax_scale(X[idx])
        dd = min(d, len(idx) - 1, Z.shape[1])
        P = pca_project(Z, dd)
        pred = ward_cluster(P, len(classes))
        truth = y[idx]
        scores.append(dict(run=r, ari=ari(truth, pred), ami=ami(truth, pred),
                           acc=matched_accuracy(pred, truth)))
    arr = {k: np.array([s[k] for s in scores]) for k in ("ari", "ami", "acc")}
    return ClusterReport(
        ari_mean=float(arr["ari"].mean()), ari_std=float(arr["ari"].std()),
        ami_mean=float(arr["ami"].mean()), ami_std=float(arr["ami"].std()),
        acc_mean=float(arr["acc"].mean()), acc_std=float(arr["acc"].std()),
        runs=runs, classes=classes, per_class=m, per_run=scores,
    )


def stratified_split(y, test_frac: float, rng: np.random.Generator):
    """Train/test index arrays with every class on both sides."""
    y = np.asarray(y)
    train, test = [], []
    for c in np.unique(y):
        ix = rng.permutation(np.flatnonzero(y == c))
        k = min(len(ix) - 1, max(1, int(round(test_frac * len(ix)))))
        test.append(ix[:k])
        train.append(ix[k:])
    return np.sort(np.concatenate(train)), np.sort(np.concatenate(test))


def protocol_BC(descriptors, target: str = "video_type", splits: int = 5, test_frac: float = 0.2,
                seed: int = 0, l2: float = 1.0) -> ClassifyReport:
    """Logistic-regression accuracy over stratified splits; scaling is fit on train rows only."""
    if target not in ("video_type", "mouse_id"):
        raise ValueError("target must be video_type or mouse_id")
    if splits < 1:
        raise ValueError("splits must be >= 1")
    labels = [getattr(x, target) for x in descriptors]
    counts = Counter(labels)
    short = sorted(c for c, n in counts.items() if n < 2)
    if short:
        raise ValueError(f"classes with fewer than 2 samples: {', '.join(map(str, short))}")
    classes = sorted(counts)
    if len(classes) < 2:
        raise ValueError("need at least 2 classes")
    X = _stack(descriptors)
    y = np.array([classes.index(v) for v in labels])
    rng = np.random.default_rng(seed)
    C = len(classes)
    conf = np.zeros((C, C), dtype=np.int64)
    accs = []
    f1 = support = None
    for s in range(splits):
        tr, te = stratified_split(y, test_frac, rng)
        model = logreg_fit(minmax_scale(X[tr]), y[tr], l2=l2)
        pred = logreg_predict(model, minmax_scale(X[te], ref=X[tr]))
        cm = confusion_matrix(y[te], pred, C)
        conf += cm
        accs.append(float((pred == y[te]).mean()))
        if s == 0:
            f1, support = f1_per_class(cm)
    return ClassifyReport(
        target=target, classes=classes,
        cv_accuracy_mean=float(np.mean(accs)), cv_accuracy_std=float(np.std(accs)),
        split_accuracy=accs, f1=[float(v) for v in f1], f1_support=[int(v) for v in support],
        confusion=conf.tolist(),
    )
