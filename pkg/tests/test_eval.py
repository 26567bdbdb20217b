import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.cluster.hierarchy import fcluster, linkage
from sklearn.metrics import adjusted_mutual_info_score, adjusted_rand_score

from zztopo.eval import (
    ami,
    ari,
    confusion_matrix,
    cut_tree,
    f1_per_class,
    logreg_fit,
    logreg_predict,
    matched_accuracy,
    minmax_scale,
    pca_fit,
    pca_project,
    protocol_A,
    protocol_BC,
    stratified_split,
    ward_cluster,
    ward_linkage,
)
from zztopo.landscape import Descriptor

labels = st.lists(st.integers(0, 3), min_size=2, max_size=30)


def test_ari_examples():
    assert ari([0, 0, 1, 1], [0, 0, 1, 1]) == 1.0
    assert ari([0, 0, 1, 1], [1, 1, 0, 0]) == 1.0
    assert ari([0, 0, 1, 1], [0, 1, 0, 1]) == -0.5


def test_ami_and_matched_examples():
    a = [0, 0, 1, 1, 2]
    assert ami(a, a) == 1.0
    assert matched_accuracy(a, a) == 1.0
    assert matched_accuracy([2, 2, 0, 0, 1], a) == 1.0
    assert matched_accuracy([0, 0, 0, 0], [0, 0, 1, 1]) == 0.5


def test_ami_chance():
    rng = np.random.default_rng(0)
    vals = [ami(rng.integers(0, 2, 40), np.arange(40)) for _ in range(200)]
    assert abs(np.mean(vals)) <= 0.05


@settings(max_examples=200, deadline=None)
@given(labels, st.integers(0, 2**31))
def test_metrics_match_sklearn(a, seed):
    b = np.random.default_rng(seed).integers(0, 3, len(a))
    assert ari(a, b) == pytest.approx(adjusted_rand_score(a, b), abs=1e-12)
    assert ami(a, b) == pytest.approx(adjusted_mutual_info_score(a, b), abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(labels, st.permutations([0, 1, 2, 3]))
def test_permutation_invariance(a, perm):
    b = [perm[x] for x in a]
    assert ari(a, b) == pytest.approx(1.0)
    assert ami(a, b) == pytest.approx(1.0)
    assert matched_accuracy(b, a) == 1.0


def test_confusion_and_f1():
    cm = confusion_matrix([0, 0, 1, 1], [0, 1, 1, 1], 2)
    assert cm.tolist() == [[1, 1], [0, 2]]
    f1, support = f1_per_class(cm)
    assert support.tolist() == [2, 2]
    assert f1[0] == pytest.approx(2 / 3) and f1[1] == pytest.approx(0.8)


def test_minmax():
    X = np.array([[2.0, 1.0], [4.0, 1.0], [6.0, 1.0]])
    S = minmax_scale(X)
    assert np.allclose(S[:, 0], [0, 0.5, 1]) and np.all(S[:, 1] == 0)


def test_pca_properties():
    rng = np.random.default_rng(0)
    line = rng.standard_normal((20, 1)) * np.array([[1.0, -2.0, 0.5]]) + np.array([1.0, 2.0, 3.0])
    model = pca_fit(line, 1)
    P = pca_project(line, 1)
    mean, comps = model[0], model[1]
    assert np.allclose(P @ comps[:1] + mean, line, atol=1e-9)
    X = rng.standard_normal((15, 4))
    Y = pca_project(X, 4)
    d0 = np.linalg.norm(X[:, None] - X[None], axis=-1)
    d1 = np.linalg.norm(Y[:, None] - Y[None], axis=-1)
    assert np.allclose(d0, d1, atol=1e-9)
    cov = np.cov(Y.T)
    assert np.allclose(cov - np.diag(np.diag(cov)), 0, atol=1e-9)
    assert np.all(np.diff(np.diag(cov)) <= 1e-12)
    with pytest.raises(ValueError):
        pca_fit(X, 5)


def test_pca_row_order_invariant():
    X = np.random.default_rng(2).standard_normal((12, 5))
    p = np.random.default_rng(3).permutation(12)
    assert np.allclose(pca_project(X, 3)[p], pca_project(X[p], 3), atol=1e-10)


def test_pca_two_points():
    X = np.array([[0.0, 0.0], [2.0, 2.0]])
    Y = pca_project(X, 1)
    assert np.var(Y) == pytest.approx(np.var(X, axis=0).sum())


def blobs(rng, k=2, m=5, sep=100.0):
    X = np.concatenate([rng.standard_normal((m, 3)) + sep * i for i in range(k)])
    return X, np.repeat(np.arange(k), m)


def test_ward_blobs_and_extremes():
    rng = np.random.default_rng(0)
    X, y = blobs(rng)
    assert ari(ward_cluster(X, 2), y) == 1.0
    assert len(set(ward_cluster(X, 10))) == 10
    assert set(ward_cluster(X, 1)) == {0}


def test_ward_matches_scipy():
    rng = np.random.default_rng(1)
    for _ in range(100):
        N = int(rng.integers(3, 25))
        X = rng.standard_normal((N, 4))
        k = int(rng.integers(1, N + 1))
        ours = cut_tree(ward_linkage(X), N, k)
        ref = fcluster(linkage(X, "ward"), k, "maxclust")
        assert ari(ours, ref) == 1.0
        # merge heights are kept as squared Ward distances
        assert np.allclose(np.sqrt(ward_linkage(X)[:, 2]), linkage(X, "ward")[:, 2])


def test_ward_deterministic():
    X = np.array([[0.0], [1.0], [2.0], [3.0]])
    assert np.array_equal(ward_linkage(X), ward_linkage(X))


def test_logreg_separable_and_duplicates():
    rng = np.random.default_rng(0)
    X = np.concatenate([rng.standard_normal((20, 2)) * 0.1 - 3, rng.standard_normal((20, 2)) * 0.1 + 3])
    y = np.repeat([0, 1], 20)
    m = logreg_fit(X, y, l2=1e-3)
    assert np.all(logreg_predict(m, X) == y)
    assert logreg_predict(m, X[:1])[0] == 0
    with pytest.raises(ValueError):
        logreg_fit(X, np.zeros(40))


def test_logreg_multiclass_labels():
    X = np.array([[0.0], [0.1], [5.0], [5.1], [10.0], [10.1]])
    y = np.array(["a", "a", "b", "b", "c", "c"])
    m = logreg_fit(X, y, l2=1e-4)
    assert list(logreg_predict(m, X)) == list(y)
    assert m.converged


def test_stratified_split():
    y = np.repeat([0, 1, 2], [5, 10, 5])
    tr, te = stratified_split(y, 0.2, np.random.default_rng(0))
    assert len(set(tr) & set(te)) == 0 and len(tr) + len(te) == 20
    assert sorted(np.bincount(y[te]).tolist()) == [1, 1, 2]


def make_descs(rng, n_cls=3, reps=10, sep=5.0, dim=12, mouse="m", video_type="nat"):
    out = []
    for c in range(n_cls):
        center = rng.standard_normal(dim) * sep
        for r in range(reps):
            out.append(Descriptor(center + rng.standard_normal(dim) * 0.1, mouse, f"g{c}_r{r}", video_type, f"g{c}"))
    return out


def test_protocol_A_separated():
    rng = np.random.default_rng(0)
    rep = protocol_A(make_descs(rng), runs=5, per_class=10, seed=1)
    assert rep.ari_mean >= 0.9 and rep.acc_mean == 1.0
    again = protocol_A(make_descs(np.random.default_rng(0)), runs=5, per_class=10, seed=1)
    assert rep.to_dict() == again.to_dict()


def test_protocol_A_shuffled_labels_chance():
    rng = np.random.default_rng(4)
    descs = make_descs(rng, sep=0.0)
    groups = rng.permutation([d.group for d in descs])
    descs = [Descriptor(d.vector, d.mouse_id, d.video_id, d.video_type, g) for d, g in zip(descs, groups)]
    rep = protocol_A(descs, runs=20, per_class=10, seed=0)
    assert abs(rep.ari_mean) <= 0.15


def test_protocol_A_insufficient_repeats():
    rng = np.random.default_rng(0)
    descs = make_descs(rng, reps=3)
    descs.append(Descriptor(np.zeros(12), "m", "lonely", "nat", "solo"))
    with pytest.raises(ValueError, match="solo"):
        protocol_A(descs, runs=2, per_class=2)


def test_protocol_BC_separable_and_accounting():
    rng = np.random.default_rng(0)
    descs = []
    for vt in ("a", "b", "c"):
        descs += make_descs(rng, n_cls=1, reps=10, sep=10, video_type=vt)
    rep = protocol_BC(descs, "video_type", splits=5, seed=0)
    assert rep.cv_accuracy_mean == 1.0 and rep.cv_accuracy_std == 0.0
    cm = np.array(rep.confusion)
    assert cm.sum() == 5 * 6 and np.all(cm.sum(axis=1) == 10)


def test_protocol_BC_random_labels_chance():
    accs = []
    for s in range(20):
        rng = np.random.default_rng(s)
        descs = [Descriptor(rng.standard_normal(8), f"m{rng.integers(3)}", f"v{i}", "t") for i in range(60)]
        accs.append(protocol_BC(descs, "mouse_id", splits=5, seed=s).cv_accuracy_mean)
    assert abs(np.mean(accs) - 1 / 3) <= 0.15


def test_protocol_BC_singleton_class():
    descs = [Descriptor(np.zeros(3), "m", f"v{i}", "a") for i in range(4)] + [Descriptor(np.ones(3), "m", "x", "b")]
    with pytest.raises(ValueError):
        protocol_BC(descs)
