"""Gridding of scattered neuron traces and per-pixel normalization."""

from __future__ import annotations

import numpy as np
from scipy.interpolate import CloughTocher2DInterpolator, LinearNDInterpolator, NearestNDInterpolator
from scipy.spatial import Delaunay, QhullError

from .types import ActivityGrid, NeuronSample, NormalizedField

EPS_NORM = 1e-9
METHODS = ("nearest", "linear", "cubic")


def grid_points(n_grid: int) -> np.ndarray:
    """(n*n, 2) array of (x, y) grid coordinates in [0, 1], row-major (y = row)."""
    g = np.linspace(0.0, 1.0, n_grid)
    X, Y = np.meshgrid(g, g)
    return np.column_stack([X.ravel(), Y.ravel()])


def _stack(samples):
    samples = list(samples)
    if not samples:
        raise ValueError("no samples")
    pts = np.array([[s.x, s.y] for s in samples], dtype=float)
    lengths = {len(s.trace) for s in samples}
    if len(lengths) != 1:
        raise ValueError("samples have traces of different lengths")
    traces = np.stack([s.trace for s in samples])  # (N, T)
    if np.any(pts < 0) or np.any(pts > 1):
        raise ValueError("sample coordinates must lie in [0, 1]^2")
    return pts, traces


def _interpolate(pts, values, n_grid, method, fill):
    """Values (N, T) at sample points -> (n, n, T); ``fill`` (T,) outside the hull."""
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    q = grid_points(n_grid)
    tri = None
    if len(pts) >= 3:
        try:
            tri = Delaunay(pts)
        except QhullError:
            tri = None
    if tri is None:
        if method != "nearest":
            raise ValueError(f"{method} interpolation needs >= 3 non-collinear points")
        out = NearestNDInterpolator(pts, values)(q)
    else:
        if method == "nearest":
            out = NearestNDInterpolator(pts, values)(q)
        elif method == "linear":
            out = LinearNDInterpolator(tri, values)(q)
        else:
            out = CloughTocher2DInterpolator(tri, values)(q)
        outside = tri.find_simplex(q) < 0
        out[outside] = fill
        out = np.where(np.isnan(out), fill[None, :], out)
    T = values.shape[1]
    return out.reshape(n_grid, n_grid, T)


def rasterize(samples, n_grid: int = 50, method: str = "linear", **ids) -> ActivityGrid:
    """Interpolate scattered traces onto an n_grid x n_grid lattice, frame by frame.

    Grid points outside the convex hull of the samples get the per-frame
    sample mean, so they normalize to 0 and never activate.
    """
    pts, traces = _stack(samples)
    if n_grid < 2:
        raise ValueError("n_grid must be >= 2")
    vals = _interpolate(pts, traces, n_grid, method, traces.mean(axis=0))
    return ActivityGrid(vals, **ids)


def _relative(values: np.ndarray, eps: float) -> np.ndarray:
    m = values.mean(axis=-1, keepdims=True)
    ok = np.abs(m) >= eps
    safe = np.where(ok, m, 1.0)
    return np.where(ok, (values - m) / safe, 0.0)


def normalize(grid: ActivityGrid, eps: float = EPS_NORM) -> NormalizedField:
    """Per-pixel (r - mean_t r) / mean_t r; pixels with |mean| < eps become 0."""
    return NormalizedField(_relative(grid.values, eps), **grid.ids())


def field_from_samples(samples, n_grid: int = 50, method: str = "linear", order: str = "appendix",
                       eps: float = EPS_NORM, **ids) -> NormalizedField:
    """Normalized field from scattered samples in either order.

    ``appendix``: interpolate raw traces, then normalize per pixel.
    ``maintext``: normalize per neuron, then interpolate; outside the hull is 0.
    """
    if order == "appendix":
        return normalize(rasterize(samples, n_grid, method, **ids), eps)
    if order != "maintext":
        raise ValueError(f"unknown order {order!r}")
    pts, traces = _stack(samples)
    delta = _relative(traces, eps)
    vals = _interpolate(pts, delta, n_grid, method, np.zeros(traces.shape[1]))
    return NormalizedField(vals, **ids)


def trim_frames(values: np.ndarray, t_active: int | None = 300) -> np.ndarray:
    """Drop trailing blank frames (all zero or non-finite), then keep at most ``t_active``."""
    values = np.asarray(values)
    flat = values.reshape(-1, values.shape[-1])
    blank = np.all((flat == 0) | ~np.isfinite(flat), axis=0)
    keep = len(blank)
    while keep > 0 and blank[keep - 1]:
        keep -= 1
    if t_active is not None:
        keep = min(keep, t_active)
    return values[..., :keep]


def samples_from_arrays(xy, traces, ids=None) -> list[NeuronSample]:
    xy = np.asarray(xy, dtype=float)
    traces = np.asarray(traces, dtype=float)
    ids = range(len(xy)) if ids is None else ids
    return [NeuronSample(int(i), float(p[0]), float(p[1]), tr) for i, p, tr in zip(ids, xy, traces)]
