import numpy as np
import pytest

from zztopo.complex import mask_complex


def ring3():
    m = np.ones((3, 3), dtype=bool)
    m[1, 1] = False
    return m


def embed(m, n):
    out = np.zeros((n, n), dtype=bool)
    out[: m.shape[0], : m.shape[1]] = m
    return out


def random_masks(rng, n_max=6, T_max=6):
    n = int(rng.integers(2, n_max + 1))
    T = int(rng.integers(2, T_max + 1))
    p = rng.uniform(0.3, 0.85)
    return rng.random((T, n, n)) < p


def layer_complexes(masks):
    from zztopo.zigzag import build_sequence

    return list(build_sequence([mask_complex(m) for m in masks]).layers)


@pytest.fixture
def ring():
    return ring3()
