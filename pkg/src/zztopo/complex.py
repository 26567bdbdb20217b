"""Superlevel cubical cells of a 2D field and their simplicial closure.

Vertex ids are global grid coordinates, ``id = row * n_grid + col``, so the
same simplex is recognised across frames by value equality of its vertex
tuple.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator

import numpy as np

Simplex = tuple[int, ...]


class SimplicialComplex:
    """Immutable, face-closed set of simplices of dimension <= 2.

    Iteration is lexicographic on the sorted vertex tuples, which makes dumps
    and any derived enumeration deterministic.
    """

    __slots__ = ("_simplices",)

    def __init__(self, simplices: Iterable[Iterable[int]] = (), check: bool = True):
        items = frozenset(tuple(int(v) for v in s) for s in simplices)
        if check:
            for s in items:
                if not 1 <= len(s) <= 3:
                    raise ValueError(f"simplex {s} has unsupported dimension")
                if any(a >= b for a, b in zip(s, s[1:])):
                    raise ValueError(f"simplex {s} is not strictly increasing")
        self._simplices = items

    @classmethod
    def closure_of(cls, simplices: Iterable[Iterable[int]]) -> "SimplicialComplex":
        """Smallest complex containing ``simplices`` (all faces added)."""
        out = set()
        for s in simplices:
            s = tuple(sorted(int(v) for v in s))
            for k in range(1, len(s) + 1):
                out.update(combinations(s, k))
        return cls(out)

    def __iter__(self) -> Iterator[Simplex]:
        return iter(sorted(self._simplices))

    def __len__(self) -> int:
        return len(self._simplices)

    def __contains__(self, simplex) -> bool:
        return tuple(simplex) in self._simplices

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self._simplices == other._simplices

    def __hash__(self) -> int:
        return hash(self._simplices)

    def __and__(self, other: "SimplicialComplex") -> "SimplicialComplex":
        return intersect(self, other)

    def __le__(self, other: "SimplicialComplex") -> bool:
        return self._simplices <= other._simplices

    def __repr__(self) -> str:
        return f"SimplicialComplex({self.counts()})"

    @property
    def simplices(self) -> frozenset[Simplex]:
        return self._simplices

    def of_dim(self, k: int) -> list[Simplex]:
        return sorted(s for s in self._simplices if len(s) == k + 1)

    def counts(self) -> tuple[int, int, int]:
        c = [0, 0, 0]
        for s in self._simplices:
            c[len(s) - 1] += 1
        return c[0], c[1], c[2]

    def is_closed(self) -> bool:
        for s in self._simplices:
            if len(s) > 1:
                for f in combinations(s, len(s) - 1):
                    if f not in self._simplices:
                        return False
        return True

    def dump(self) -> str:
        """One simplex per line, space-separated vertex ids, lexicographic."""
        return "".join(" ".join(map(str, s)) + "\n" for s in self)


@dataclass(frozen=True)
class CubicalCells:
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    # corners in increasing id order: (v00, v01, v10, v11) = (a, a+1, a+n, a+n+1)
    squares: tuple[tuple[int, int, int, int], ...]

    def counts(self) -> tuple[int, int, int]:
        return len(self.vertices), len(self.edges), len(self.squares)


def superlevel_mask(frame, threshold: float = 0.0) -> np.ndarray:
    """Active pixels of ``frame``: strictly above ``threshold``."""
    frame = np.asarray(frame, dtype=float)
    if frame.ndim != 2:
        raise ValueError("frame must be a 2D array")
    if not np.all(np.isfinite(frame)):
        raise ValueError("frame contains non-finite values")
    return frame > threshold


def _cell_masks(mask: np.ndarray):
    """Boolean activity of horizontal edges, vertical edges and unit squares.

    A cell is active iff all of its corner vertices are active.  Works on any
    leading batch axes; the last two axes are (row, col).
    """
    h = mask[..., :, :-1] & mask[..., :, 1:]
    v = mask[..., :-1, :] & mask[..., 1:, :]
    sq = h[..., :-1, :] & h[..., 1:, :]
    return h, v, sq


def cubical_cells(mask) -> CubicalCells:
    mask = np.asarray(mask, dtype=bool)
    if mask.ndim != 2 or mask.shape[0] != mask.shape[1]:
        raise ValueError("mask must be a square 2D array")
    n = mask.shape[0]
    h, v, sq = _cell_masks(mask)
    ids = np.arange(n * n).reshape(n, n)
    verts = tuple(int(i) for i in ids[mask])
    hr, hc = np.nonzero(h)
    vr, vc = np.nonzero(v)
    edges = [(int(a), int(a + 1)) for a in ids[hr, hc]]
    edges += [(int(a), int(a + n)) for a in ids[vr, vc]]
    sr, sc = np.nonzero(sq)
    squares = tuple((int(a), int(a + 1), int(a + n), int(a + n + 1)) for a in ids[sr, sc])
    return CubicalCells(verts, tuple(sorted(edges)), squares)


def closure_adapter(cells: CubicalCells) -> SimplicialComplex:
    """Simplicial complex from cubical cells.

    Active vertices and grid edges are inserted as they are; every active
    square contributes the 2-skeleton of the abstract 3-simplex on its four
    corners, i.e. both diagonals and all four triangles.
    """
    out: set[Simplex] = {(v,) for v in cells.vertices}
    out.update(cells.edges)
    for corners in cells.squares:
        out.update(combinations(corners, 2))
        out.update(combinations(corners, 3))
    return SimplicialComplex(out, check=False)


def mask_complex(mask) -> SimplicialComplex:
    return closure_adapter(cubical_cells(mask))


def intersect(a: SimplicialComplex, b: SimplicialComplex) -> SimplicialComplex:
    return SimplicialComplex(a.simplices & b.simplices, check=False)
