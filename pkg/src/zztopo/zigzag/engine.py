"""Zigzag persistence over F2 for complexes of dimension <= 2.

The zigzag is expanded into simplex-wise insertions and deletions and
rewritten as an up-down filtration over simplex *instances* (a simplex added
twice counts as two instances).  The down part is turned into an ordinary
filtration by coning: deleting instance ``s`` becomes adding ``w * s`` for a
fresh apex ``w``, in reverse deletion order.  One standard persistence pass
over ``instances + w + cones`` gives every pairing; each pair is then mapped
back to the arrows of the original zigzag.

A pair (instance ``c``, cone of ``x``) whose insertion arrow comes *after*
the deletion arrow of ``x`` describes a class of one dimension lower living
between the two arrows.  A phantom vertex present on every layer makes the
reduced homology of the coned picture coincide with ordinary H0.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .sequence import PersistenceInterval, ToggleFiltration

_ERR_FACE = 1
_ERR_COFACE = 2


def face_table(simplices: np.ndarray) -> np.ndarray:
    """(M, 3) indices of codimension-1 faces (padded with -1).

    Raises if a face of some simplex is missing from ``simplices``.
    """
    simplices = np.asarray(simplices, dtype=np.int64)
    M = len(simplices)
    faces = np.full((M, 3), -1, dtype=np.int64)
    if M == 0:
        return faces
    base = int(simplices.max()) + 2
    if base**3 >= 2**62:
        raise ValueError("vertex ids too large for key encoding")

    def key(a, b, c):
        return ((a + 1) * base + (b + 1)) * base + (c + 1)

    keys = key(simplices[:, 0], simplices[:, 1], simplices[:, 2])
    order = np.argsort(keys, kind="stable")
    skeys = keys[order]
    if np.any(skeys[1:] == skeys[:-1]):
        raise ValueError("duplicate simplex in filtration")
    dims = (simplices >= 0).sum(axis=1) - 1

    def lookup(rows, fk, col):
        pos = np.searchsorted(skeys, fk)
        pos = np.minimum(pos, M - 1)
        if np.any(skeys[pos] != fk):
            raise ValueError("filtration is missing a face of one of its simplices")
        faces[rows, col] = order[pos]

    s = simplices
    e = np.nonzero(dims == 1)[0]
    lookup(e, key(s[e, 0], -1, -1), 0)
    lookup(e, key(s[e, 1], -1, -1), 1)
    t = np.nonzero(dims == 2)[0]
    lookup(t, key(s[t, 0], s[t, 1], -1), 0)
    lookup(t, key(s[t, 0], s[t, 2], -1), 1)
    lookup(t, key(s[t, 1], s[t, 2], -1), 2)
    return faces


@njit(cache=True)
def _sweep(ev_simplex, ev_insert, faces, n_simplices, n_inst):
    current = np.full(n_simplices, -1, np.int64)
    cofaces = np.zeros(n_simplices, np.int64)
    inst_simplex = np.empty(n_inst, np.int64)
    inst_ins = np.empty(n_inst, np.int64)
    inst_del = np.full(n_inst, -1, np.int64)
    inst_faces = np.full((n_inst, 3), -1, np.int64)
    del_order = np.empty(n_inst, np.int64)
    k = 0
    r = 0
    for a in range(len(ev_simplex)):
        s = ev_simplex[a]
        if ev_insert[a]:
            for j in range(3):
                f = faces[s, j]
                if f < 0:
                    break
                fi = current[f]
                if fi < 0:
                    return _ERR_FACE, a, inst_simplex, inst_ins, inst_del, inst_faces, del_order
                inst_faces[k, j] = fi
                cofaces[f] += 1
            current[s] = k
            inst_simplex[k] = s
            inst_ins[k] = a + 1
            k += 1
        else:
            i = current[s]
            if cofaces[s] > 0:
                return _ERR_COFACE, a, inst_simplex, inst_ins, inst_del, inst_faces, del_order
            for j in range(3):
                f = faces[s, j]
                if f < 0:
                    break
                cofaces[f] -= 1
            inst_del[i] = a + 1
            del_order[r] = i
            r += 1
            current[s] = -1
    return 0, -1, inst_simplex, inst_ins, inst_del, inst_faces, del_order


@njit(cache=True)
def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@njit(cache=True)
def _xor_desc(a, na, b, nb, out):
    i = 0
    j = 0
    m = 0
    while i < na and j < nb:
        if a[i] > b[j]:
            out[m] = a[i]
            i += 1
            m += 1
        elif a[i] < b[j]:
            out[m] = b[j]
            j += 1
            m += 1
        else:
            i += 1
            j += 1
    while i < na:
        out[m] = a[i]
        i += 1
        m += 1
    while j < nb:
        out[m] = b[j]
        j += 1
        m += 1
    return m


@njit(cache=True)
def _reduce_columns(cols_e, col_ptr, col_rows, n_rows, cleared, pairs_c, pairs_d, n_pairs):
    """Left-to-right reduction of the given columns (rows pre-sorted descending).

    Columns whose E-index is flagged in ``cleared`` are skipped.  Every
    processed column is expected to end with a pivot; returns updated pair
    count, and flags pivots in ``cleared`` for the next dimension down.
    """
    n_cols = len(cols_e)
    owner = np.full(n_rows, -1, np.int64)
    pool = np.empty(max(16, 4 * (col_ptr[-1] + 1)), np.int64)
    start = np.empty(n_cols, np.int64)
    length = np.zeros(n_cols, np.int64)
    used = 0
    work = np.empty(64, np.int64)
    tmp = np.empty(64, np.int64)
    for c in range(n_cols):
        e = cols_e[c]
        if cleared[e]:
            continue
        lo = col_ptr[c]
        hi = col_ptr[c + 1]
        nw = hi - lo
        if nw > len(work):
            work = np.empty(2 * nw, np.int64)
            tmp = np.empty(2 * nw, np.int64)
        for q in range(nw):
            work[q] = col_rows[lo + q]
        while nw > 0:
            o = owner[work[0]]
            if o < 0:
                break
            ol = length[o]
            need = nw + ol
            if need > len(tmp):
                tmp = np.empty(2 * need, np.int64)
                w2 = np.empty(2 * need, np.int64)
                w2[:nw] = work[:nw]
                work = w2
            nw = _xor_desc(work, nw, pool[start[o] : start[o] + ol], ol, tmp)
            work, tmp = tmp, work
        if nw == 0:
            continue
        if used + nw > len(pool):
            grown = np.empty(2 * (used + nw), np.int64)
            grown[:used] = pool[:used]
            pool = grown
        start[c] = used
        length[c] = nw
        pool[used : used + nw] = work[:nw]
        used += nw
        piv = work[0]
        owner[piv] = c
        cleared[piv] = True
        pairs_c[n_pairs] = piv
        pairs_d[n_pairs] = e
        n_pairs += 1
    return n_pairs


@njit(cache=True)
def _pair_all(inst_dim, inst_faces, del_order):
    """Persistence pairs (creator, destroyer) of the coned filtration, by E-index.

    E-index layout: instances ``0..N-1`` in insertion order, apex ``N``,
    cone of instance ``i`` at ``2N - del_rank[i]``.
    """
    N = len(inst_dim)
    n_e = 2 * N + 1
    del_rank = np.empty(N, np.int64)
    for r in range(N):
        del_rank[del_order[r]] = r
    pairs_c = np.empty(n_e, np.int64)
    pairs_d = np.empty(n_e, np.int64)
    n_pairs = 0
    cleared = np.zeros(n_e, np.bool_)

    # dimension 3: cones over triangles
    n3 = 0
    nnz = 0
    for e in range(N + 1, n_e):
        i = del_order[2 * N - e]
        if inst_dim[i] == 2:
            n3 += 1
            nnz += 4
    cols = np.empty(n3, np.int64)
    ptr = np.zeros(n3 + 1, np.int64)
    rows = np.empty(nnz, np.int64)
    c = 0
    for e in range(N + 1, n_e):
        i = del_order[2 * N - e]
        if inst_dim[i] == 2:
            f0 = 2 * N - del_rank[inst_faces[i, 0]]
            f1 = 2 * N - del_rank[inst_faces[i, 1]]
            f2 = 2 * N - del_rank[inst_faces[i, 2]]
            # sort the three cone rows descending, then the triangle itself
            if f0 < f1:
                f0, f1 = f1, f0
            if f1 < f2:
                f1, f2 = f2, f1
            if f0 < f1:
                f0, f1 = f1, f0
            p = ptr[c]
            rows[p] = f0
            rows[p + 1] = f1
            rows[p + 2] = f2
            rows[p + 3] = i
            ptr[c + 1] = p + 4
            cols[c] = e
            c += 1
    n_pairs = _reduce_columns(cols, ptr, rows, n_e, cleared, pairs_c, pairs_d, n_pairs)

    # dimension 2: triangle instances, then cones over edges
    n2 = 0
    for i in range(N):
        if inst_dim[i] == 2:
            n2 += 1
    for e in range(N + 1, n_e):
        if inst_dim[del_order[2 * N - e]] == 1:
            n2 += 1
    cols = np.empty(n2, np.int64)
    ptr = np.zeros(n2 + 1, np.int64)
    rows = np.empty(3 * n2, np.int64)
    c = 0
    for i in range(N):
        if inst_dim[i] == 2:
            f0 = inst_faces[i, 0]
            f1 = inst_faces[i, 1]
            f2 = inst_faces[i, 2]
            if f0 < f1:
                f0, f1 = f1, f0
            if f1 < f2:
                f1, f2 = f2, f1
            if f0 < f1:
                f0, f1 = f1, f0
            p = ptr[c]
            rows[p] = f0
            rows[p + 1] = f1
            rows[p + 2] = f2
            ptr[c + 1] = p + 3
            cols[c] = i
            c += 1
    for e in range(N + 1, n_e):
        i = del_order[2 * N - e]
        if inst_dim[i] == 1:
            f0 = 2 * N - del_rank[inst_faces[i, 0]]
            f1 = 2 * N - del_rank[inst_faces[i, 1]]
            if f0 < f1:
                f0, f1 = f1, f0
            p = ptr[c]
            rows[p] = f0
            rows[p + 1] = f1
            rows[p + 2] = i
            ptr[c + 1] = p + 3
            cols[c] = e
            c += 1
    n_pairs = _reduce_columns(cols, ptr, rows, n_e, cleared, pairs_c, pairs_d, n_pairs)

    # dimensions 0/1: union-find with the elder rule
    parent = np.arange(n_e, dtype=np.int64)
    for e in range(n_e):
        if e < N:
            if inst_dim[e] != 1:
                continue
            u = inst_faces[e, 0]
            w = inst_faces[e, 1]
        elif e == N:
            continue
        else:
            i = del_order[2 * N - e]
            if inst_dim[i] != 0:
                continue
            u = i
            w = N
        ru = _find(parent, u)
        rw = _find(parent, w)
        if ru == rw:
            continue
        if ru < rw:
            ru, rw = rw, ru
        parent[ru] = rw
        pairs_c[n_pairs] = ru
        pairs_d[n_pairs] = e
        n_pairs += 1
    return pairs_c[:n_pairs], pairs_d[:n_pairs]


def _events(filt: ToggleFiltration):
    """Simplex-wise arrows, ordered by layer boundary, deletions first.

    Deletions go cofaces-first and insertions faces-first; a phantom vertex
    (index M) is inserted before and deleted after everything else.
    """
    M = len(filt)
    dims = filt.dims
    lens = np.diff(filt.ptr)
    simplex = np.repeat(np.arange(M, dtype=np.int64), lens)
    t = filt.times
    rank_in_run = np.arange(len(t)) - np.repeat(filt.ptr[:-1], lens)
    insert = rank_in_run % 2 == 0
    sd = dims[simplex]
    phase = np.where(insert, 3 + sd, 2 - sd)
    key = (t * 6 + phase) * (M + 1) + simplex
    order = np.argsort(key, kind="stable")
    ev_s = np.concatenate([[M], simplex[order], [M]])
    ev_ins = np.concatenate([[True], insert[order], [False]])
    ev_t = np.concatenate([[-1], t[order], [filt.n_layers + 1]])
    return ev_s, ev_ins, ev_t


def compute_zigzag(filt: ToggleFiltration, max_dim: int = 1) -> list[PersistenceInterval]:
    """Zigzag barcode in dimensions ``0..max_dim`` (at most 1).

    Intervals are closed ranges of layer indices, sorted by (dim, birth, death).
    """
    if max_dim > 1:
        raise ValueError("only dimensions 0 and 1 are supported")
    L = filt.n_layers
    M = len(filt)
    faces = face_table(filt.simplices)
    faces = np.vstack([faces, np.full((1, 3), -1, dtype=np.int64)])
    ev_s, ev_ins, ev_t = _events(filt)
    n_inst = int(ev_ins.sum())
    err, at, inst_s, ins_arrow, del_arrow, inst_faces, del_order = _sweep(
        ev_s, ev_ins, faces, M + 1, n_inst
    )
    if err:
        s = ev_s[at]
        what = "missing face" if err == _ERR_FACE else "live coface"
        raise ValueError(
            f"filtration is not closed under faces: simplex {filt.simplex(s)} "
            f"toggles at layer {ev_t[at]} with a {what}"
        )
    dims_all = np.append(filt.dims, 0)
    inst_dim = dims_all[inst_s]
    pc, pd = _pair_all(inst_dim, inst_faces, del_order)
    return _map_pairs(pc, pd, inst_dim, ins_arrow, del_arrow, del_order, ev_t, L, max_dim)


def _map_pairs(pc, pd, inst_dim, ins_arrow, del_arrow, del_order, ev_t, L, max_dim):
    N = len(inst_dim)
    keep = pc != N  # the apex pair belongs to reduced homology only
    pc, pd = pc[keep], pd[keep]

    def decode(x):
        is_inst = x < N
        inst = np.where(is_inst, x, del_order[np.clip(2 * N - x, 0, N - 1)])
        arrow = np.where(is_inst, ins_arrow[inst], del_arrow[inst])
        return is_inst, inst, arrow

    c_inst, c_i, c_arrow = decode(pc)
    d_inst, d_i, d_arrow = decode(pd)
    dim = inst_dim[c_i].copy()
    start = c_arrow.copy()
    stop = d_arrow - 1
    # creator and destroyer both cones: the class lives in the down part
    both_cone = ~c_inst & ~d_inst
    start[both_cone] = d_arrow[both_cone]
    stop[both_cone] = c_arrow[both_cone] - 1
    # instance killed by a cone whose deletion precedes the insertion
    flip = c_inst & ~d_inst & (c_arrow > d_arrow)
    dim[flip] -= 1
    start[flip] = d_arrow[flip]
    stop[flip] = c_arrow[flip] - 1

    # position P(l) of layer l = number of arrows at boundaries <= l
    pos = np.searchsorted(ev_t, np.arange(L), side="right")
    birth = np.searchsorted(pos, start, side="left")
    death = np.searchsorted(pos, stop, side="right") - 1
    ok = (birth <= death) & (dim >= 0) & (dim <= max_dim)
    out = sorted(
        PersistenceInterval(int(k), int(b), int(d))
        for k, b, d in zip(dim[ok], birth[ok], death[ok])
    )
    return out
