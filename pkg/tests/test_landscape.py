import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zztopo.landscape import (
    Descriptor,
    LandscapeVector,
    assemble_descriptor,
    landscape,
    load_descriptor,
    read_pooled_csv,
    store_descriptor,
    write_pooled_csv,
)


def naive(bars, L, R, K):
    t = np.linspace(0.0, L - 1, R)
    out = np.zeros((K, R))
    for r in range(R):
        vals = sorted((max(0.0, min(t[r] - b, d - t[r])) for b, d in bars), reverse=True)
        for k in range(min(K, len(vals))):
            out[k, r] = vals[k]
    return out


def random_bars(rng, L):
    n = int(rng.integers(0, 21))
    b = rng.integers(0, L, n)
    d = np.array([rng.integers(x, L) for x in b], dtype=int)
    return list(zip(b.tolist(), d.tolist()))


def test_examples():
    assert np.array_equal(landscape([], 5, 4, 3).values, np.zeros((3, 4)))
    lv = landscape([(0, 4)], 5, 5, 2)
    assert np.array_equal(lv.values[0], [0, 1, 2, 1, 0])
    assert np.all(lv.values[1] == 0)
    lv = landscape([(0, 4), (0, 4)], 5, 5, 3)
    assert np.array_equal(lv.values[0], lv.values[1]) and np.all(lv.values[2] == 0)


def test_validation():
    with pytest.raises(ValueError):
        landscape([(0, 5)], 5)
    with pytest.raises(ValueError):
        landscape([(3, 2)], 5)
    with pytest.raises(ValueError):
        landscape([], 5, R=1)


def test_matches_naive_100_barcodes():
    rng = np.random.default_rng(0)
    for _ in range(100):
        L = int(rng.integers(2, 40))
        R = int(rng.integers(2, 60))
        K = int(rng.integers(1, 6))
        bars = random_bars(rng, L)
        assert np.array_equal(landscape(bars, L, R, K).values, naive(bars, L, R, K))


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 30), st.integers(0, 10**6))
def test_monotone_and_lipschitz(L, seed):
    rng = np.random.default_rng(seed)
    bars = random_bars(rng, L)
    v = landscape(bars, L, 40, 5).values
    assert np.all(v >= 0)
    assert np.all(np.diff(v, axis=0) <= 0)
    t = np.linspace(0, L - 1, 40)
    assert np.all(np.abs(np.diff(v, axis=1)) <= np.diff(t)[None, :] + 1e-12)


def test_assemble():
    a = LandscapeVector(np.zeros((2, 2)))
    b = LandscapeVector(np.ones((2, 2)))
    d = assemble_descriptor({1: b, 0: a}, 2)
    assert np.array_equal(d.vector, [0, 0, 0, 0, 1, 1, 1, 1])
    with pytest.raises(ValueError):
        assemble_descriptor({0: a}, 2)
    big = assemble_descriptor([LandscapeVector(np.zeros((5, 50)))] * 10, 10)
    assert len(big.vector) == 2500


def test_store_roundtrip(tmp_path):
    v = np.random.default_rng(0).random(12).astype(np.float32).astype(float)
    d = Descriptor(v, "m", "v1", "nat", "g", meta=dict(n_frames=3))
    store_descriptor(d, tmp_path / "x.zld")
    e = load_descriptor(tmp_path / "x.zld")
    assert np.array_equal(e.vector, v)
    assert e.ids() == d.ids() and e.meta == {"n_frames": 3}
    (tmp_path / "bad.zld").write_bytes(b"ZLD1\x05\x00\x00\x00")
    with pytest.raises(ValueError):
        load_descriptor(tmp_path / "bad.zld")


def test_pooled_csv(tmp_path):
    ds = [Descriptor(np.array([0.1, 0.25]), "m", f"v{i}", "t") for i in range(3)]
    write_pooled_csv(ds, tmp_path / "p.csv")
    back = read_pooled_csv(tmp_path / "p.csv")
    assert [b.trial_id for b in back] == ["m/v0", "m/v1", "m/v2"]
    assert np.allclose(back[0].vector, [0.1, 0.25])
    assert (tmp_path / "p.csv").read_text().splitlines()[0] == "trial_id,video_id,video_type,mouse_id,v0,v1"
