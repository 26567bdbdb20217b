"""Interleaved intersection zigzags and their toggle-time encoding."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from ..complex import SimplicialComplex, _cell_masks


class PersistenceInterval(NamedTuple):
    """Closed interval of layer indices; ``death`` is the last alive layer."""

    dim: int
    birth: int
    death: int


@dataclass(frozen=True)
class ZigzagSequence:
    """Layers ``S_0, S_0 & S_1, S_1, ..., S_{T-1}``; odd layers are intersections."""

    layers: tuple[SimplicialComplex, ...]

    def __len__(self) -> int:
        return len(self.layers)

    @property
    def n_frames(self) -> int:
        return (len(self.layers) + 1) // 2


def build_sequence(frames: Sequence[SimplicialComplex]) -> ZigzagSequence:
    frames = list(frames)
    if len(frames) < 2:
        raise ValueError("a zigzag needs at least 2 frames")
    layers = [frames[0]]
    for a, b in zip(frames, frames[1:]):
        layers.append(a & b)
        layers.append(b)
    return ZigzagSequence(tuple(layers))


@dataclass(frozen=True, eq=False)
class ToggleFiltration:
    """Per-simplex toggle times over ``n_layers`` layers.

    ``simplices`` is an (M, 3) integer array of vertex ids padded with -1.
    Toggles of simplex ``i`` are ``times[ptr[i]:ptr[i+1]]``, strictly
    increasing, of even length; simplex ``i`` is present on the half-open
    layer runs ``[t0, t1), [t2, t3), ...``.
    """

    simplices: np.ndarray
    ptr: np.ndarray
    times: np.ndarray
    n_layers: int

    def __post_init__(self):
        s = np.asarray(self.simplices, dtype=np.int64).reshape(-1, 3)
        object.__setattr__(self, "simplices", s)
        object.__setattr__(self, "ptr", np.asarray(self.ptr, dtype=np.int64))
        object.__setattr__(self, "times", np.asarray(self.times, dtype=np.int64))
        if len(self.ptr) != len(s) + 1:
            raise ValueError("ptr must have one entry per simplex plus one")
        lens = np.diff(self.ptr)
        if np.any(lens % 2):
            raise ValueError("every simplex needs an even number of toggles")
        if len(self.times) and (self.times.min() < 0 or self.times.max() > self.n_layers):
            raise ValueError("toggle time outside 0..n_layers")
        same = np.repeat(np.arange(len(s)), lens)
        inc = np.diff(self.times) > 0
        if np.any(~inc & (same[1:] == same[:-1])):
            raise ValueError("toggle times must be strictly increasing per simplex")

    @classmethod
    def from_entries(cls, entries, n_layers: int) -> "ToggleFiltration":
        entries = list(entries)
        simp = np.full((len(entries), 3), -1, dtype=np.int64)
        ptr = [0]
        times: list[int] = []
        for i, (s, toggles) in enumerate(entries):
            s = tuple(s)
            if not 1 <= len(s) <= 3:
                raise ValueError(f"simplex {s} has unsupported dimension")
            simp[i, : len(s)] = s
            times.extend(toggles)
            ptr.append(len(times))
        return cls(simp, np.array(ptr), np.array(times, dtype=np.int64), n_layers)

    def __len__(self) -> int:
        return len(self.simplices)

    @property
    def dims(self) -> np.ndarray:
        return (self.simplices >= 0).sum(axis=1) - 1

    def simplex(self, i: int) -> tuple[int, ...]:
        return tuple(int(v) for v in self.simplices[i] if v >= 0)

    def toggles(self, i: int) -> list[int]:
        return self.times[self.ptr[i] : self.ptr[i + 1]].tolist()

    def entries(self) -> Iterator[tuple[tuple[int, ...], list[int]]]:
        for i in range(len(self)):
            yield self.simplex(i), self.toggles(i)

    def permuted(self, order) -> "ToggleFiltration":
        """Same filtration with simplex entries reordered."""
        items = list(self.entries())
        return ToggleFiltration.from_entries([items[i] for i in order], self.n_layers)

    def layer(self, idx: int) -> SimplicialComplex:
        """Decode the complex at layer ``idx``."""
        out = []
        for s, tg in self.entries():
            alive = sum(1 for t in tg if t <= idx) % 2 == 1
            if alive:
                out.append(s)
        return SimplicialComplex(out, check=False)


def _runs_to_toggles(member: np.ndarray):
    """Toggle CSR from a (L, M) membership matrix."""
    L, M = member.shape
    padded = np.zeros((L + 2, M), dtype=bool)
    padded[1:-1] = member
    change = padded[1:] != padded[:-1]  # (L + 1, M); row t is boundary t
    cols, rows = np.nonzero(change.T)
    ptr = np.zeros(M + 1, dtype=np.int64)
    np.cumsum(np.bincount(cols, minlength=M), out=ptr[1:])
    return ptr, rows.astype(np.int64)


def encode(seq: ZigzagSequence) -> ToggleFiltration:
    """Toggle-time encoding of a zigzag of complexes."""
    for i, layer in enumerate(seq.layers):
        if not layer.is_closed():
            raise ValueError(f"layer {i} is not closed under faces")
    universe = sorted(set().union(*(layer.simplices for layer in seq.layers)))
    index = {s: i for i, s in enumerate(universe)}
    L = len(seq.layers)
    member = np.zeros((L, len(universe)), dtype=bool)
    for t, layer in enumerate(seq.layers):
        member[t, [index[s] for s in layer.simplices]] = True
    ptr, times = _runs_to_toggles(member)
    simp = np.full((len(universe), 3), -1, dtype=np.int64)
    for i, s in enumerate(universe):
        simp[i, : len(s)] = s
    return ToggleFiltration(simp, ptr, times, L)


def encode_masks(masks) -> ToggleFiltration:
    """Encode the intersection zigzag of closure complexes of binary masks.

    Equivalent to ``encode(build_sequence([mask_complex(m) for m in masks]))``
    but vectorised over frames.  ``masks`` has shape (T, n, n).
    """
    masks = np.asarray(masks, dtype=bool)
    if masks.ndim != 3 or masks.shape[1] != masks.shape[2]:
        raise ValueError("masks must have shape (T, n, n)")
    T, n, _ = masks.shape
    if T < 2:
        raise ValueError("a zigzag needs at least 2 frames")
    L = 2 * T - 1
    lay = np.empty((L, n, n), dtype=bool)
    lay[0::2] = masks
    lay[1::2] = masks[:-1] & masks[1:]
    h, v, sq = _cell_masks(lay)

    ids = np.arange(n * n).reshape(n, n)
    a = ids[:-1, :-1].ravel()
    b, c, d = a + 1, a + n, a + n + 1
    neg = np.full_like(a, -1)
    simp = np.concatenate(
        [
            np.stack([ids.ravel(), np.full(n * n, -1), np.full(n * n, -1)], axis=1),
            np.stack([ids[:, :-1].ravel(), ids[:, 1:].ravel(), np.full(n * (n - 1), -1)], axis=1),
            np.stack([ids[:-1, :].ravel(), ids[1:, :].ravel(), np.full(n * (n - 1), -1)], axis=1),
            np.stack([a, d, neg], axis=1),
            np.stack([b, c, neg], axis=1),
            np.stack([a, b, c], axis=1),
            np.stack([a, b, d], axis=1),
            np.stack([a, c, d], axis=1),
            np.stack([b, c, d], axis=1),
        ]
    )
    sqm = sq.reshape(L, -1)
    member = np.concatenate(
        [lay.reshape(L, -1), h.reshape(L, -1), v.reshape(L, -1)] + [sqm] * 6, axis=1
    )
    ptr, times = _runs_to_toggles(member)
    return ToggleFiltration(simp, ptr, times, L)


def select_dimension(bars, k: int) -> list[PersistenceInterval]:
    return [b for b in bars if b.dim == k]


def dump_barcode(bars) -> str:
    """CSV ``dim,birth,death`` sorted by (dim, birth, death)."""
    lines = ["dim,birth,death"] + [f"{d},{b},{e}" for d, b, e in sorted(bars)]
    return "\n".join(lines) + "\n"
