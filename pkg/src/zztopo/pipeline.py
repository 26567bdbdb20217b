"""Per-plane descriptor computation and the batch descriptor pass."""

from __future__ import annotations

import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from .ingest import (
    ActivityGrid,
    ControlSpec,
    apply_control,
    field_from_samples,
    load_grid,
    load_grid_csv,
    load_samples_csv,
    normalize,
    scan_dataset,
    trim_frames,
)
from .ingest.types import NormalizedField
from .landscape import (
    Descriptor,
    LandscapeVector,
    assemble_descriptor,
    landscape,
    load_descriptor,
    store_descriptor,
    write_pooled_csv,
)
from .zigzag import mask_zigzag, select_dimension

log = logging.getLogger("zztopo")


@dataclass
class RunConfig:
    data: str = "data"
    out: str = "out"
    n_grid: int = 50
    method: str = "linear"
    order: str = "appendix"
    t_active: int | None = 300
    threshold: float = 0.0
    R: int = 50
    K: int = 5
    Z: int = 10
    control: str = "none"
    control_seed: int = 0
    seed: int = 0
    runs: int = 20
    per_class: int = 10
    pca_dim: int = 10
    splits: int = 5
    test_frac: float = 0.2
    l2: float = 1.0
    target: str = "video_type"
    mouse: str | None = None
    video_type: str | None = None
    workers: int = 1
    repeats: int = 10
    synth_T: int = 300
    synth_Z: int = 2
    sigma: float = 0.1
    force: bool = False

    @classmethod
    def field_names(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        unknown = sorted(set(d) - set(cls.field_names()))
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(unknown)}")
        return cls(**d)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"

    def save(self, directory) -> None:
        Path(directory).mkdir(parents=True, exist_ok=True)
        (Path(directory) / "run_config.json").write_text(self.to_json())


def plane_landscape(field: NormalizedField | np.ndarray, threshold: float = 0.0, R: int = 50, K: int = 5):
    """H1 landscape of one normalized plane (n, n, T); returns (LandscapeVector, H1 bars)."""
    v = field.values if isinstance(field, ActivityGrid) else np.asarray(field, dtype=float)
    masks = np.moveaxis(v > threshold, 2, 0)
    bars = select_dimension(mask_zigzag(masks), 1)
    L = 2 * masks.shape[0] - 1
    return landscape(bars, L, R, K), bars


def load_field(path, cfg: RunConfig, **ids) -> NormalizedField:
    """Read one plane file and return its trimmed, normalized field."""
    path = Path(path)
    name = path.name
    if name.endswith(".samples.csv"):
        samples = load_samples_csv(path)
        traces = trim_frames(np.stack([s.trace for s in samples]), cfg.t_active)
        samples = [type(s)(s.neuron_id, s.x, s.y, tr) for s, tr in zip(samples, traces)]
        return field_from_samples(samples, cfg.n_grid, cfg.method, cfg.order, **ids)
    grid = load_grid(path, **ids) if name.endswith(".zgf") else load_grid_csv(path, **ids)
    return normalize(grid.with_values(trim_frames(grid.values, cfg.t_active)))


def _plane_job(args):
    path, ids, cfg_dict = args
    cfg = RunConfig(**cfg_dict)
    t0 = time.perf_counter()
    try:
        f = load_field(path, cfg, **ids)
        f = apply_control(f, ControlSpec(cfg.control, cfg.control_seed))
        lv, bars = plane_landscape(f, cfg.threshold, cfg.R, cfg.K)
    except (ValueError, OSError) as exc:
        return ids, None, 0, 0, str(exc), time.perf_counter() - t0
    return ids, lv.values, len(bars), f.n_frames, None, time.perf_counter() - t0


def resolve_workers(cfg: RunConfig) -> int:
    env = os.environ.get("ZGF_WORKERS")
    if env:
        return max(1, int(env))
    return max(1, int(cfg.workers))


def run_jobs(jobs, workers: int):
    if workers <= 1 or len(jobs) <= 1:
        return [_plane_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_plane_job, jobs, chunksize=1))


def compute_descriptors(cfg: RunConfig, workers: int | None = None):
    """Descriptors of every complete trial in ``cfg.data``.

    Returns (descriptors, per-plane results, errors, timing).  A trial with a
    missing or unreadable plane is left out and listed in ``errors``.
    """
    trials = scan_dataset(cfg.data)
    workers = resolve_workers(cfg) if workers is None else workers
    cfg_dict = asdict(cfg)
    jobs = []
    errors: list[dict] = []
    complete = []
    for tr in trials:
        missing = [p for p in range(cfg.Z) if p not in tr.planes]
        if missing:
            msg = f"missing planes {missing}"
            log.warning("%s: %s", tr.trial_id, msg)
            errors.append(dict(trial_id=tr.trial_id, error=msg))
            continue
        complete.append(tr)
        for p in range(cfg.Z):
            ids = dict(mouse_id=tr.mouse_id, plane_id=p, video_id=tr.video_id, video_type=tr.video_type)
            jobs.append((str(tr.planes[p]), ids, cfg_dict))
    t0 = time.perf_counter()
    results = run_jobs(jobs, workers)
    wall = time.perf_counter() - t0
    by_trial: dict[tuple, dict] = {}
    plane_times = []
    for ids, vals, n_bars, T, err, dt in results:
        plane_times.append(dt)
        by_trial.setdefault((ids["mouse_id"], ids["video_id"]), {})[ids["plane_id"]] = (vals, n_bars, T, err)
    descs = []
    planes = []
    for tr in complete:
        got = by_trial[(tr.mouse_id, tr.video_id)]
        bad = {p: r[3] for p, r in got.items() if r[3]}
        if bad:
            for p, e in sorted(bad.items()):
                log.warning("%s plane %d: %s", tr.trial_id, p, e)
            errors.append(dict(trial_id=tr.trial_id, error="; ".join(f"plane {p}: {e}" for p, e in sorted(bad.items()))))
            continue
        per_plane = {p: LandscapeVector(got[p][0]) for p in range(cfg.Z)}
        meta = dict(n_frames=int(got[0][2]), h1_bars=[int(got[p][1]) for p in range(cfg.Z)],
                    R=cfg.R, K=cfg.K, Z=cfg.Z)
        descs.append(assemble_descriptor(per_plane, cfg.Z, mouse_id=tr.mouse_id, video_id=tr.video_id,
                                         video_type=tr.video_type, group=tr.group, meta=meta))
        planes.append((tr, per_plane))
    timing = dict(
        workers=workers, planes=len(jobs), wall_seconds=wall,
        plane_seconds_mean=float(np.mean(plane_times)) if plane_times else 0.0,
        plane_seconds_max=float(np.max(plane_times)) if plane_times else 0.0,
    )
    return descs, planes, errors, timing


def write_store(out, descs, planes) -> None:
    out = Path(out)
    for d, (tr, per_plane) in zip(descs, planes):
        ddir = out / "descriptors" / d.mouse_id
        ddir.mkdir(parents=True, exist_ok=True)
        store_descriptor(d, ddir / f"{d.video_id}.zld")
        pdir = out / "planes" / d.mouse_id / d.video_id
        pdir.mkdir(parents=True, exist_ok=True)
        for p, lv in per_plane.items():
            store_descriptor(Descriptor(lv.flat, d.mouse_id, d.video_id, d.video_type, d.group,
                                        meta=dict(plane_id=p, R=lv.R, K=lv.K)), pdir / f"plane{p}.zld")
    write_pooled_csv(descs, out / "descriptors.csv")


def read_store(out) -> list[Descriptor]:
    root = Path(out) / "descriptors"
    if not root.is_dir():
        return []
    return [load_descriptor(p) for p in sorted(root.glob("*/*.zld"))]


def read_plane_landscapes(out, mouse_id: str, video_id: str) -> dict[int, LandscapeVector]:
    pdir = Path(out) / "planes" / mouse_id / video_id
    res = {}
    for p in sorted(pdir.glob("plane*.zld")):
        d = load_descriptor(p)
        res[int(d.meta["plane_id"])] = LandscapeVector(d.vector.reshape(int(d.meta["K"]), int(d.meta["R"])))
    return res
