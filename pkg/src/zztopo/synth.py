"""Synthetic activity grids: annuli with known on/off schedules over a noisy baseline."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.ndimage import gaussian_filter

from .ingest.formats import store_grid, write_meta
from .ingest.types import ActivityGrid


@dataclass(frozen=True, eq=False)
class Blob:
    """Compact hole-free patch: the ``size`` pixels nearest to ``center``, shown on ``on`` frames."""

    center: tuple[float, float]
    size: int
    on: np.ndarray


@dataclass(frozen=True, eq=False)
class SynthClassSpec:
    """One synthetic video class.

    ``on`` marks the frames where the annulus is present.  ``centers`` is a
    (T, 2) array of (row, col) positions, or None for a static ring at
    ``center``.  Radii are scalars or length-T schedules.  Noise is white
    Gaussian noise smoothed over (space, time) and rescaled to std ``sigma``.
    ``blobs`` are extra active patches without loops.
    """

    name: str
    on: np.ndarray
    center: tuple[float, float] = (24.5, 24.5)
    centers: np.ndarray | None = None
    r_inner: float | np.ndarray = 6.0
    r_outer: float | np.ndarray = 10.0
    amplitude: float = 2.0
    baseline: float = 1.0
    sigma: float = 0.1
    smooth: tuple[float, float] = (1.0, 1.0)
    n_grid: int = 50
    Z: int = 2
    video_type: str = "synthetic"
    blobs: tuple[Blob, ...] = ()

    @property
    def T(self) -> int:
        return len(self.on)

    def schedule(self):
        T = self.T
        c = np.tile(np.asarray(self.center, float), (T, 1)) if self.centers is None else np.asarray(self.centers, float)
        r0 = np.broadcast_to(np.asarray(self.r_inner, float), (T,))
        r1 = np.broadcast_to(np.asarray(self.r_outer, float), (T,))
        if c.shape != (T, 2):
            raise ValueError("centers must have shape (T, 2)")
        return c, r0, r1

    def validate(self):
        if self.T < 2:
            raise ValueError("need at least 2 frames")
        if self.amplitude <= self.baseline or self.baseline <= 0:
            raise ValueError("need amplitude > baseline > 0")
        c, r0, r1 = self.schedule()
        on = np.asarray(self.on, bool)
        if np.any(r0 >= r1) or np.any(r0 < 0):
            raise ValueError("need 0 <= r_inner < r_outer")
        lo = (c - r1[:, None])[on]
        hi = (c + r1[:, None])[on]
        if len(lo) and (lo.min() < 0 or hi.max() > self.n_grid - 1):
            raise ValueError("annulus does not fit inside the grid")
        for b in self.blobs:
            if len(b.on) != self.T:
                raise ValueError("blob schedule length must equal T")
            if not 0 < b.size <= self.n_grid**2:
                raise ValueError("bad blob size")


def annulus(n: int, center, r_inner: float, r_outer: float) -> np.ndarray:
    rr, cc = np.mgrid[0:n, 0:n]
    d = np.hypot(rr - center[0], cc - center[1])
    return (d >= r_inner) & (d <= r_outer)


def blob(n: int, center, size: int) -> np.ndarray:
    rr, cc = np.mgrid[0:n, 0:n]
    d = np.hypot(rr - center[0], cc - center[1]).ravel()
    out = np.zeros(n * n, dtype=bool)
    out[np.argsort(d, kind="stable")[:size]] = True
    return out.reshape(n, n)


def ring_masks(spec: SynthClassSpec) -> np.ndarray:
    """(n, n, T) boolean annulus membership."""
    c, r0, r1 = spec.schedule()
    out = np.zeros((spec.n_grid, spec.n_grid, spec.T), dtype=bool)
    for t in np.flatnonzero(np.asarray(spec.on, bool)):
        out[:, :, t] = annulus(spec.n_grid, c[t], r0[t], r1[t])
    return out


def active_masks(spec: SynthClassSpec) -> np.ndarray:
    """(n, n, T) pixels at amplitude: the annulus plus any blobs."""
    out = ring_masks(spec)
    for b in spec.blobs:
        m = blob(spec.n_grid, b.center, b.size)
        out[:, :, np.asarray(b.on, bool)] |= m[:, :, None]
    return out


def _smooth_noise(rng, shape, sigma, smooth):
    if sigma == 0:
        return np.zeros(shape)
    s = (smooth[0], smooth[0], smooth[1])
    w = rng.standard_normal(shape)
    if max(s) == 0:
        return sigma * w
    delta = np.zeros(tuple(int(8 * v) + 1 for v in s))
    delta[tuple(k // 2 for k in delta.shape)] = 1.0
    gain = np.sqrt((gaussian_filter(delta, s, mode="constant") ** 2).sum())
    return sigma * gaussian_filter(w, s, mode="reflect") / gain


def gen_trial(spec: SynthClassSpec, seed, **ids) -> list[ActivityGrid]:
    """One grid per plane; planes share the ring schedule and differ in noise."""
    spec.validate()
    clean = np.where(active_masks(spec), spec.amplitude, spec.baseline)
    rng = np.random.default_rng(seed)
    out = []
    for z in range(spec.Z):
        vals = clean + _smooth_noise(rng, clean.shape, spec.sigma, spec.smooth)
        out.append(ActivityGrid(vals, plane_id=z, **ids))
    return out


def default_classes(n_grid: int = 50, T: int = 300, Z: int = 2, sigma: float = 0.1,
                    smooth=(2.0, 2.0)) -> list[SynthClassSpec]:
    """Three classes built from one ring and two blobs of the same pixel count.

    Each thing is shown during one third of the video; class k shows the
    ring in third k and the blobs in the other two.  Every class thus has
    the same frames (up to order) and the same pixel traces (up to
    placement), and differs only in when the loop exists.
    """
    cut = np.linspace(0, T, 4).round().astype(int)
    thirds = []
    for k in range(3):
        on = np.zeros(T, bool)
        on[cut[k] : cut[k + 1]] = True
        thirds.append(on)
    s = n_grid / 50
    c = (24.5 * s, 14.5 * s)
    r1 = 10.0 * s
    r0 = 6.0 * s
    size = int(annulus(n_grid, c, r0, r1).sum())
    spots = ((12.0 * s, 37.0 * s), (37.0 * s, 37.0 * s))
    out = []
    for k in range(3):
        blobs = tuple(Blob(spots[j], size, thirds[(k + 1 + j) % 3]) for j in range(2))
        out.append(SynthClassSpec(f"c{k}", thirds[k], center=c, r_inner=r0, r_outer=r1, sigma=sigma,
                                  smooth=tuple(smooth), n_grid=n_grid, Z=Z, blobs=blobs))
    return out


@dataclass
class SynthTrial:
    mouse_id: str
    video_id: str
    video_type: str
    group: str
    label: int
    planes: list[ActivityGrid] = field(default_factory=list)


def gen_dataset(classes, repeats: int = 10, seed: int = 0, mouse_id: str = "synth") -> list[SynthTrial]:
    """``repeats`` noisy trials per class; trial seeds depend only on (seed, class, repeat)."""
    classes = list(classes)
    if len(classes) < 2:
        raise ValueError("need at least 2 classes")
    trials = []
    for k, spec in enumerate(classes):
        for r in range(repeats):
            vid = f"{spec.name}_r{r:02d}"
            ids = dict(mouse_id=mouse_id, video_id=vid, video_type=spec.video_type)
            planes = gen_trial(spec, [seed, k, r], **ids)
            trials.append(SynthTrial(mouse_id, vid, spec.video_type, spec.name, k, planes))
    return trials


def write_dataset(trials, root) -> None:
    """Write trials in the ingest directory layout."""
    root = Path(root)
    meta: dict[str, dict] = {}
    for tr in trials:
        for g in tr.planes:
            d = root / tr.mouse_id / str(g.plane_id)
            d.mkdir(parents=True, exist_ok=True)
            store_grid(g, d / f"{tr.video_id}.zgf")
        meta.setdefault(tr.mouse_id, {})[tr.video_id] = {"video_type": tr.video_type, "group": tr.group}
    for mouse, videos in meta.items():
        write_meta(root / mouse, videos)
