import numpy as np
import pytest

from zztopo.complex import superlevel_mask
from zztopo.ingest import normalize, scan_dataset
from zztopo.pipeline import plane_landscape
from zztopo.synth import SynthClassSpec, annulus, blob, default_classes, gen_dataset, gen_trial, write_dataset
from zztopo.zigzag import PersistenceInterval, mask_zigzag, select_dimension


def h1(grid):
    f = normalize(grid)
    return select_dimension(mask_zigzag(np.moveaxis(f.values > 0, 2, 0)), 1)


def test_noiseless_static_ring_mask():
    spec = SynthClassSpec("s", np.ones(4, bool), sigma=0.0, n_grid=30, center=(14.5, 14.5))
    g = gen_trial(spec, 0)[0]
    ring = annulus(30, (14.5, 14.5), 6, 10)
    for t in range(4):
        assert np.array_equal(superlevel_mask(g.values[..., t], spec.baseline), ring)


@pytest.mark.parametrize("a,b,T", [(0, 5, 12), (3, 7, 10), (2, 2, 6)])
def test_single_bar_over_on_frames(a, b, T):
    on = np.zeros(T, bool)
    on[a : b + 1] = True
    spec = SynthClassSpec("s", on, sigma=0.0, n_grid=30, center=(14.5, 14.5))
    assert h1(gen_trial(spec, 1)[0]) == [PersistenceInterval(1, 2 * a, 2 * b)]


def test_first_half_bar():
    T = 20
    on = np.arange(T) < T // 2
    spec = SynthClassSpec("s", on, sigma=0.0, n_grid=30, center=(14.5, 14.5))
    assert h1(gen_trial(spec, 0)[0]) == [PersistenceInterval(1, 0, T - 2)]


def test_zero_sigma_seed_free():
    spec = SynthClassSpec("s", np.ones(5, bool), sigma=0.0, n_grid=30, center=(14.5, 14.5))
    a = gen_trial(spec, 1)
    b = gen_trial(spec, 2)
    assert all(np.array_equal(x.values, y.values) for x, y in zip(a, b))


def test_noiseless_same_class_same_descriptor():
    cls = default_classes(n_grid=30, T=12, Z=1, sigma=0.0)
    trials = gen_dataset(cls, repeats=2, seed=0)
    v = [plane_landscape(normalize(t.planes[0]), 0.0, 20, 3)[0].values for t in trials]
    assert np.array_equal(v[0], v[1]) and np.array_equal(v[2], v[3])
    assert not np.array_equal(v[0], v[2])


def test_out_of_bounds():
    with pytest.raises(ValueError):
        gen_trial(SynthClassSpec("s", np.ones(3, bool), center=(3.0, 3.0)), 0)
    with pytest.raises(ValueError):
        gen_trial(SynthClassSpec("s", np.ones(3, bool), r_inner=10, r_outer=5), 0)


def test_default_classes_share_frames_and_traces():
    cls = default_classes(n_grid=50, T=30, Z=1, sigma=0.0)
    from zztopo.synth import active_masks

    m = [active_masks(c) for c in cls]
    counts = [sorted(x.sum(axis=(0, 1)).tolist()) for x in m]
    assert counts[0] == counts[1] == counts[2]
    traces = [sorted(map(tuple, x.reshape(-1, 30).astype(int).tolist())) for x in m]
    per_len = [sorted(sum(t) for t in tr) for tr in traces]
    assert per_len[0] == per_len[1] == per_len[2]
    assert blob(50, (12, 37), 204).sum() == 204


def test_gen_dataset_balanced_and_deterministic(tmp_path):
    cls = default_classes(n_grid=20, T=9, Z=2)
    with pytest.raises(ValueError):
        gen_dataset(cls[:1])
    a = gen_dataset(cls, repeats=10, seed=3)
    assert len(a) == 30
    assert [sum(t.label == k for t in a) for k in range(3)] == [10, 10, 10]
    write_dataset(a, tmp_path / "a")
    write_dataset(gen_dataset(cls, repeats=10, seed=3), tmp_path / "b")
    for p in sorted((tmp_path / "a").rglob("*.zgf")):
        assert p.read_bytes() == (tmp_path / "b" / p.relative_to(tmp_path / "a")).read_bytes()
    recs = scan_dataset(tmp_path / "a")
    assert len(recs) == 30 and all(sorted(r.planes) == [0, 1] for r in recs)
    assert recs[0].group == "c0"
