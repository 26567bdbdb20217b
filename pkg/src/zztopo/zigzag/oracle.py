"""Brute-force F2 homology oracles, independent of the zigzag engine.

Vectors over F2 are Python ints used as bitsets.  Everything here is
quadratic or worse and meant for test-sized complexes only.
"""

from __future__ import annotations

from collections import Counter
from itertools import combinations

from ..complex import SimplicialComplex


class _Echelon:
    """Incrementally built F2 basis, reduced by leading bit.

    Each stored row remembers which inserted vectors it is a sum of, so
    membership tests can also return coordinates.
    """

    def __init__(self):
        self.rows: dict[int, tuple[int, int]] = {}  # lead bit -> (vector, combo)
        self.count = 0

    def reduce(self, v: int) -> tuple[int, int]:
        combo = 0
        while v:
            lead = v.bit_length() - 1
            hit = self.rows.get(lead)
            if hit is None:
                break
            v ^= hit[0]
            combo ^= hit[1]
        return v, combo

    def add(self, v: int) -> bool:
        r, combo = self.reduce(v)
        tag = 1 << self.count
        self.count += 1
        if r == 0:
            return False
        self.rows[r.bit_length() - 1] = (r, combo ^ tag)
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)


def rank_f2(vectors) -> int:
    ech = _Echelon()
    for v in vectors:
        ech.add(v)
    return ech.rank


def _index(c: SimplicialComplex, k: int) -> dict:
    return {s: i for i, s in enumerate(c.of_dim(k))}


def _boundary_vectors(c: SimplicialComplex, k: int, rows: dict) -> list[int]:
    """Columns of the boundary map C_k -> C_{k-1}, rows indexed by ``rows``."""
    out = []
    for s in c.of_dim(k):
        v = 0
        if k > 0:
            for f in combinations(s, k):
                v |= 1 << rows[f]
        out.append(v)
    return out


def _cycle_basis(c: SimplicialComplex, k: int, rows: dict) -> list[int]:
    """Basis of Z_k(c) written in the chain coordinates ``rows`` (a superset)."""
    simplices = c.of_dim(k)
    if k == 0:
        return [1 << rows[s] for s in simplices]
    lower = _index(c, k - 1)
    ech = _Echelon()
    cycles = []
    for i, s in enumerate(simplices):
        v = 0
        for f in combinations(s, k):
            v |= 1 << lower[f]
        r, combo = ech.reduce(v)
        tag = 1 << ech.count
        ech.count += 1
        if r == 0:
            chain = combo ^ tag  # sum of these simplices has zero boundary
            z = 0
            j = 0
            while chain:
                if chain & 1:
                    z |= 1 << rows[simplices[j]]
                chain >>= 1
                j += 1
            cycles.append(z)
        else:
            ech.rows[r.bit_length() - 1] = (r, combo ^ tag)
    return cycles


def oracle_betti(c: SimplicialComplex, k: int) -> int:
    """beta_k = dim C_k - rank d_k - rank d_{k+1} over F2."""
    if k < 0:
        raise ValueError("k must be non-negative")
    n_k = len(c.of_dim(k))
    rk = 0 if k == 0 else rank_f2(_boundary_vectors(c, k, _index(c, k - 1)))
    rk1 = rank_f2(_boundary_vectors(c, k + 1, _index(c, k))) if k + 1 <= 2 else 0
    return n_k - rk - rk1


def oracle_arrow_rank(small: SimplicialComplex, large: SimplicialComplex, k: int) -> int:
    """Rank of H_k(small) -> H_k(large) induced by inclusion, over F2."""
    if not small <= large:
        raise ValueError("small is not a subcomplex of large")
    rows = _index(large, k)
    bnd = _boundary_vectors(large, k + 1, rows) if k + 1 <= 2 else []
    z_small = _cycle_basis(small, k, rows)
    rb = rank_f2(bnd)
    return rank_f2(bnd + z_small) - rb


class _Homology:
    """H_k of one complex: representative cycles and a coordinate map."""

    def __init__(self, c: SimplicialComplex, k: int, rows: dict):
        self.rows = rows
        self.full = _Echelon()
        for v in _boundary_vectors(c, k + 1, rows) if k + 1 <= 2 else []:
            self.full.add(v)
        self.n_b = self.full.count
        self.reps: list[int] = []
        self._tag_to_h: dict[int, int] = {}
        for z in _cycle_basis(c, k, rows):
            tag = self.full.count
            if self.full.add(z):
                self._tag_to_h[tag] = len(self.reps)
                self.reps.append(z)

    @property
    def dim(self) -> int:
        return len(self.reps)

    def coords(self, z: int) -> int:
        """Coordinates (bitset over reps) of a cycle given in this complex's rows."""
        r, combo = self.full.reduce(z)
        if r:
            raise ValueError("vector is not a cycle of this complex")
        out = 0
        tag = 0
        while combo:
            if combo & 1 and tag >= self.n_b:
                out |= 1 << self._tag_to_h[tag]
            combo >>= 1
            tag += 1
        return out


def _translate(z: int, src_rows: dict, dst_rows: dict) -> int:
    inv = {i: s for s, i in src_rows.items()}
    out = 0
    j = 0
    while z:
        if z & 1:
            out |= 1 << dst_rows[inv[j]]
        z >>= 1
        j += 1
    return out


def _solve_space(constraints: list[int], n: int) -> list[int]:
    """Basis of {x in F2^n : <c, x> = 0 for every constraint c}."""
    # Gaussian elimination on constraint rows, pivot on lowest set bit
    pivots: dict[int, int] = {}
    for c in constraints:
        for p, row in pivots.items():
            if c >> p & 1:
                c ^= row
        if c:
            p = (c & -c).bit_length() - 1
            for q in list(pivots):
                if pivots[q] >> p & 1:
                    pivots[q] ^= c
            pivots[p] = c
    free = [i for i in range(n) if i not in pivots]
    basis = []
    for f in free:
        x = 1 << f
        for p, row in pivots.items():
            if row >> f & 1:
                x |= 1 << p
        basis.append(x)
    return basis


def oracle_barcode(layers: list[SimplicialComplex], k: int) -> Counter:
    """Exact zigzag barcode of an alternating inclusion sequence.

    Odd layers must be subcomplexes of both neighbours.  For every span
    [i, j] the number of bars containing it equals the rank of the map from
    the limit to the colimit of the restricted diagram; multiplicities
    follow by inclusion-exclusion.
    """
    L = len(layers)
    homs = [_Homology(c, k, _index(c, k)) for c in layers]
    # arrow maps between adjacent layers (odd -> even), as images of reps
    maps = {}
    for j in range(1, L, 2):
        for nb in (j - 1, j + 1):
            if nb < L:
                src, dst = homs[j], homs[nb]
                maps[(j, nb)] = [
                    dst.coords(_translate(z, src.rows, dst.rows)) for z in src.reps
                ]

    def span_rank(i: int, j: int) -> int:
        offs = []
        n = 0
        for t in range(i, j + 1):
            offs.append(n)
            n += homs[t].dim
        if n == 0:
            return 0
        # limit: tuples (x_t) with f(x_odd) = x_even on every arrow inside
        cons = []
        rel = []
        for a in range(i, j + 1):
            if a % 2 == 0:
                continue
            for b in (a - 1, a + 1):
                if not i <= b <= j:
                    continue
                img = maps[(a, b)]
                for r in range(homs[b].dim):
                    c = 1 << (offs[b - i] + r)
                    for s, im in enumerate(img):
                        if im >> r & 1:
                            c ^= 1 << (offs[a - i] + s)
                    cons.append(c)
                for s, im in enumerate(img):
                    rel.append((1 << (offs[a - i] + s)) ^ (im << offs[b - i]))
        lim = _solve_space(cons, n)
        mask = (1 << homs[i].dim) - 1
        ech = _Echelon()
        for v in rel:
            ech.add(v)
        base = ech.rank
        for x in lim:
            ech.add((x >> offs[0] & mask) << offs[0])
        return ech.rank - base

    rank = {}
    for i in range(L):
        for j in range(i, L):
            rank[(i, j)] = span_rank(i, j)

    def r(i, j):
        if i < 0 or j >= L:
            return 0
        return rank[(i, j)]

    bars: Counter = Counter()
    for i in range(L):
        for j in range(i, L):
            m = r(i, j) - r(i - 1, j) - r(i, j + 1) + r(i - 1, j + 1)
            if m:
                bars[(i, j)] = m
    return bars
