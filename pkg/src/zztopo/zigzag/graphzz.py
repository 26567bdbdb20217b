"""Zigzag H0 of graph sequences, and H0/H1 of binary-mask zigzags.

For a graph zigzag rewritten as an up-down filtration of instances, the
barcode splits into three parts that need no coning:

* finite pairs of the insertion-order filtration (union-find);
* finite pairs of the reverse-deletion-order filtration (union-find);
* intervals crossing the top.  In degree 0 each component of the instance
  graph contributes one, from its first insertion to its last deletion.  In
  degree 1 they follow a maximum spanning forest keyed by deletion rank:
  an edge closing a cycle evicts the earliest-deleted edge on that cycle.

Crossing degree-1 intervals whose eviction precedes the insertion turn into
degree-0 intervals of the original zigzag, which is all this module keeps.

For masks, H0 is read off the 4-connected foreground graphs and H1 off the
8-connected background graphs plus an outer node (complements in the
sphere), whose reduced H0 is dual to H1 of the superlevel complex.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .engine import _sweep, face_table
from .sequence import PersistenceInterval, _runs_to_toggles

_INF = np.iinfo(np.int64).max


# node record: left, right, parent, agg, weight, rev
L_, R_, P_, A_, W_, V_ = 0, 1, 2, 3, 4, 5


@njit(cache=True, inline="always")
def _is_root(nd, x):
    p = nd[x, P_]
    return p < 0 or (nd[p, L_] != x and nd[p, R_] != x)


@njit(cache=True, inline="always")
def _push(nd, x):
    if nd[x, V_]:
        a = nd[x, L_]
        b = nd[x, R_]
        nd[x, L_] = b
        nd[x, R_] = a
        if a >= 0:
            nd[a, V_] ^= 1
        if b >= 0:
            nd[b, V_] ^= 1
        nd[x, V_] = 0


@njit(cache=True, inline="always")
def _pull(nd, x):
    best = x
    bw = nd[x, W_]
    a = nd[x, L_]
    if a >= 0:
        c = nd[a, A_]
        if nd[c, W_] < bw:
            best = c
            bw = nd[c, W_]
    b = nd[x, R_]
    if b >= 0:
        c = nd[b, A_]
        if nd[c, W_] < bw:
            best = c
    nd[x, A_] = best


@njit(cache=True, inline="always")
def _rotate(nd, x):
    p = nd[x, P_]
    g = nd[p, P_]
    if nd[p, L_] == x:
        b = nd[x, R_]
        nd[p, L_] = b
        nd[x, R_] = p
    else:
        b = nd[x, L_]
        nd[p, R_] = b
        nd[x, L_] = p
    if b >= 0:
        nd[b, P_] = p
    if g >= 0:
        if nd[g, L_] == p:
            nd[g, L_] = x
        elif nd[g, R_] == p:
            nd[g, R_] = x
    nd[x, P_] = g
    nd[p, P_] = x
    _pull(nd, p)
    _pull(nd, x)


@njit(cache=True)
def _splay(nd, x, stack):
    n = 0
    y = x
    stack[n] = y
    n += 1
    while not _is_root(nd, y):
        y = nd[y, P_]
        stack[n] = y
        n += 1
    for i in range(n - 1, -1, -1):
        _push(nd, stack[i])
    while not _is_root(nd, x):
        p = nd[x, P_]
        if not _is_root(nd, p):
            g = nd[p, P_]
            if (nd[g, L_] == p) == (nd[p, L_] == x):
                _rotate(nd, p)
            else:
                _rotate(nd, x)
        _rotate(nd, x)


@njit(cache=True)
def _access(nd, x, stack):
    last = -1
    y = x
    while y >= 0:
        _splay(nd, y, stack)
        nd[y, R_] = last
        _pull(nd, y)
        last = y
        y = nd[y, P_]
    _splay(nd, x, stack)


@njit(cache=True)
def _make_root(nd, x, stack):
    _access(nd, x, stack)
    nd[x, V_] ^= 1


@njit(cache=True)
def _uf_find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@njit(cache=True)
def _graph_pairs(inst_dim, inst_faces, ins_arrow, del_arrow, del_order):
    """Degree-0 intervals of a graph zigzag as (start, stop) arrow positions."""
    N = len(inst_dim)
    out_s = np.empty(2 * N, np.int64)
    out_e = np.empty(2 * N, np.int64)
    k = 0

    # insertion order: ordinary pairs, and components of the instance graph
    uf = np.arange(N, dtype=np.int64)
    for i in range(N):
        if inst_dim[i] != 1:
            continue
        a = _uf_find(uf, inst_faces[i, 0])
        b = _uf_find(uf, inst_faces[i, 1])
        if a == b:
            continue
        if a < b:
            a, b = b, a
        uf[a] = b
        out_s[k] = ins_arrow[a]
        out_e[k] = ins_arrow[i] - 1
        k += 1

    # reverse deletion order: relative pairs
    del_rank = np.empty(N, np.int64)
    for r in range(N):
        del_rank[del_order[r]] = r
    uf2 = np.arange(N, dtype=np.int64)
    for r in range(N - 1, -1, -1):
        i = del_order[r]
        if inst_dim[i] != 1:
            continue
        a = _uf_find(uf2, inst_faces[i, 0])
        b = _uf_find(uf2, inst_faces[i, 1])
        if a == b:
            continue
        # root = latest deleted vertex of the component; the other one dies
        if del_rank[a] > del_rank[b]:
            a, b = b, a
        uf2[a] = b
        out_s[k] = del_arrow[i]
        out_e[k] = del_arrow[a] - 1
        k += 1

    # crossing degree-0: one per component, first insertion to last deletion
    last = np.full(N, -1, np.int64)
    for i in range(N):
        if inst_dim[i] == 0:
            r = _uf_find(uf, i)
            if last[r] < 0 or del_arrow[i] > del_arrow[last[r]]:
                last[r] = i
    for i in range(N):
        if inst_dim[i] == 0 and uf[i] == i:
            out_s[k] = ins_arrow[i]
            out_e[k] = del_arrow[last[i]] - 1
            k += 1

    # crossing degree-1 via maximum spanning forest on deletion rank
    nd = np.full((N, 8), -1, np.int32)
    for i in range(N):
        nd[i, A_] = i
        nd[i, W_] = del_rank[i] if inst_dim[i] == 1 else 2**31 - 1
        nd[i, V_] = 0
    stack = np.empty(N + 1, np.int64)
    uf3 = np.arange(N, dtype=np.int64)
    for i in range(N):
        if inst_dim[i] != 1:
            continue
        u = inst_faces[i, 0]
        w = inst_faces[i, 1]
        a = _uf_find(uf3, u)
        b = _uf_find(uf3, w)
        if a != b:
            uf3[a] = b
            nd[i, P_] = u  # i is still isolated
            _make_root(nd, w, stack)
            nd[w, P_] = i
            continue
        _make_root(nd, u, stack)
        _access(nd, w, stack)
        g = nd[w, A_]
        if nd[g, W_] > nd[i, W_]:
            g = i
        else:
            # g has both tree neighbours on the exposed path u..w: splitting
            # its splay tree at g removes it from the forest
            _splay(nd, g, stack)
            a = nd[g, L_]
            b = nd[g, R_]
            if a >= 0:
                nd[a, P_] = -1
            if b >= 0:
                nd[b, P_] = -1
            nd[g, L_] = -1
            nd[g, R_] = -1
            nd[g, P_] = -1
            nd[g, A_] = g
            nd[i, P_] = u
            _make_root(nd, w, stack)
            nd[w, P_] = i
        if ins_arrow[i] > del_arrow[g]:
            out_s[k] = del_arrow[g]
            out_e[k] = ins_arrow[i] - 1
            k += 1
    return out_s[:k], out_e[:k]


def _events_plain(ptr, times, dims):
    M = len(dims)
    lens = np.diff(ptr)
    simplex = np.repeat(np.arange(M, dtype=np.int64), lens)
    rank_in_run = np.arange(len(times)) - np.repeat(ptr[:-1], lens)
    insert = rank_in_run % 2 == 0
    sd = dims[simplex]
    phase = np.where(insert, 3 + sd, 2 - sd)
    key = (times * 6 + phase) * (M + 1) + simplex
    order = np.argsort(key, kind="stable")
    return simplex[order], insert[order], times[order]


def graph_zigzag_h0(edges: np.ndarray, n_vertices: int, vmember: np.ndarray, emember: np.ndarray):
    """Degree-0 zigzag barcode of a sequence of subgraphs of a fixed graph.

    ``vmember`` (L, V) and ``emember`` (L, E) give per-layer membership;
    every present edge must have both endpoints present.  Returns a list of
    (birth, death) layer pairs.
    """
    L = vmember.shape[0]
    edges = np.asarray(edges, dtype=np.int64)
    simp = np.full((n_vertices + len(edges), 3), -1, dtype=np.int64)
    simp[:n_vertices, 0] = np.arange(n_vertices)
    simp[n_vertices:, :2] = edges
    member = np.concatenate([vmember, emember], axis=1)
    ptr, times = _runs_to_toggles(member)
    dims = (simp >= 0).sum(axis=1) - 1
    faces = np.full((len(simp), 3), -1, dtype=np.int64)
    faces[n_vertices:, :2] = edges  # vertex i sits at row i
    ev_s, ev_ins, ev_t = _events_plain(ptr, times, dims)
    n_inst = int(ev_ins.sum())
    err, at, inst_s, ins_arrow, del_arrow, inst_faces, del_order = _sweep(
        ev_s, ev_ins, faces, len(simp), n_inst
    )
    if err:
        raise ValueError(f"graph sequence is not valid at layer {ev_t[at]}")
    start, stop = _graph_pairs(dims[inst_s], inst_faces, ins_arrow, del_arrow, del_order)
    pos = np.searchsorted(ev_t, np.arange(L), side="right")
    birth = np.searchsorted(pos, start, side="left")
    death = np.searchsorted(pos, stop, side="right") - 1
    ok = birth <= death
    return list(zip(birth[ok].tolist(), death[ok].tolist()))


def _grid_edges(n: int, diagonal: bool):
    ids = np.arange(n * n).reshape(n, n)
    parts = [
        np.stack([ids[:, :-1].ravel(), ids[:, 1:].ravel()], axis=1),
        np.stack([ids[:-1, :].ravel(), ids[1:, :].ravel()], axis=1),
    ]
    if diagonal:
        parts.append(np.stack([ids[:-1, :-1].ravel(), ids[1:, 1:].ravel()], axis=1))
        parts.append(np.stack([ids[:-1, 1:].ravel(), ids[1:, :-1].ravel()], axis=1))
    return np.concatenate(parts)


def _edge_member(vm: np.ndarray, edges: np.ndarray) -> np.ndarray:
    return vm[:, edges[:, 0]] & vm[:, edges[:, 1]]


def mask_zigzag(masks) -> list[PersistenceInterval]:
    """H0 and H1 zigzag barcode of the closure complexes of ``masks`` (T, n, n).

    Same output as ``compute_zigzag(encode_masks(masks))``.
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
    fg = lay.reshape(L, n * n)

    e4 = _grid_edges(n, diagonal=False)
    h0 = graph_zigzag_h0(e4, n * n, fg, _edge_member(fg, e4))

    # background: inactive pixels, 8-connected, plus an outer node joined to the border
    bg = np.ones((L, n * n + 1), dtype=bool)
    bg[:, : n * n] = ~fg
    e8 = _grid_edges(n, diagonal=True)
    border = np.unique(np.concatenate([np.arange(n), np.arange(n * (n - 1), n * n),
                                       np.arange(0, n * n, n), np.arange(n - 1, n * n, n)]))
    outer = np.stack([border, np.full(len(border), n * n)], axis=1)
    e_bg = np.concatenate([e8, outer])
    h1 = graph_zigzag_h0(e_bg, n * n + 1, bg, _edge_member(bg, e_bg))
    h1.remove((0, L - 1))  # the outer node's own component

    bars = [PersistenceInterval(0, b, d) for b, d in h0]
    bars += [PersistenceInterval(1, b, d) for b, d in h1]
    return sorted(bars)
