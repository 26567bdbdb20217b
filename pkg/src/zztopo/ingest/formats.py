"""On-disk formats: ZGF1 binary grids, CSV grids, scattered-sample CSV, dataset layout.

Layout::

    <root>/<mouse>/<plane>/<video>.zgf    (or .csv grid, or .samples.csv)
    <root>/<mouse>/meta.json              {video_id: {"video_type": ..., "group": ...}}
"""

from __future__ import annotations

import csv
import json
import re
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .types import ActivityGrid, NeuronSample

MAGIC = b"ZGF1"
_HEADER = struct.Struct("<4sIII")
GRID_SUFFIXES = (".zgf", ".samples.csv", ".csv")


class FormatError(ValueError):
    pass


def store_grid(grid: ActivityGrid, path) -> None:
    v = np.ascontiguousarray(grid.values, dtype="<f4")
    n, _, T = v.shape
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, n, n, T))
        fh.write(v.tobytes())


def load_grid(path, **ids) -> ActivityGrid:
    """Read a ZGF1 file; values come back as float64 copies of the stored float32."""
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise FormatError(f"{path}: truncated header")
    magic, n1, n2, T = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r}")
    if n1 != n2 or n1 < 2 or T < 2:
        raise FormatError(f"{path}: bad dimensions ({n1}, {n2}, {T})")
    need = _HEADER.size + 4 * n1 * n2 * T
    if len(data) != need:
        raise FormatError(f"{path}: expected {need} bytes, found {len(data)}")
    v = np.frombuffer(data, dtype="<f4", offset=_HEADER.size).reshape(n1, n2, T)
    try:
        return ActivityGrid(v.astype(np.float64), **ids)
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from None


def store_grid_csv(grid: ActivityGrid, path) -> None:
    n, _, T = grid.values.shape
    rows = grid.values.reshape(n * n, T).T
    np.savetxt(path, rows, delimiter=",", fmt="%.9g")


def load_grid_csv(path, **ids) -> ActivityGrid:
    """T rows of n*n comma-separated values in row-major pixel order."""
    try:
        rows = np.loadtxt(path, delimiter=",", ndmin=2)
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from None
    T, nn = rows.shape
    n = int(round(np.sqrt(nn)))
    if n * n != nn:
        raise FormatError(f"{path}: row length {nn} is not a square")
    try:
        return ActivityGrid(rows.T.reshape(n, n, T), **ids)
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from None


def store_samples_csv(samples, path) -> None:
    samples = list(samples)
    T = len(samples[0].trace) if samples else 0
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["neuron_id", "x", "y"] + [f"f{t}" for t in range(T)])
        for s in samples:
            w.writerow([s.neuron_id, repr(s.x), repr(s.y)] + [repr(float(v)) for v in s.trace])


def load_samples_csv(path) -> list[NeuronSample]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or header[:3] != ["neuron_id", "x", "y"]:
            raise FormatError(f"{path}: header must start with neuron_id,x,y")
        T = len(header) - 3
        out = []
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != T + 3:
                raise FormatError(f"{path}:{line_no}: expected {T + 3} fields")
            try:
                out.append(NeuronSample(int(row[0]), float(row[1]), float(row[2]),
                                        np.array(row[3:], dtype=float)))
            except ValueError as exc:
                raise FormatError(f"{path}:{line_no}: {exc}") from None
    return out


@dataclass
class TrialRecord:
    mouse_id: str
    video_id: str
    video_type: str
    group: str
    planes: dict[int, Path] = field(default_factory=dict)

    @property
    def trial_id(self) -> str:
        return f"{self.mouse_id}/{self.video_id}"


def plane_id_of(name: str) -> int | None:
    m = re.search(r"(\d+)$", name)
    return int(m.group(1)) if m else None


def _video_of(path: Path) -> str | None:
    for suf in GRID_SUFFIXES:
        if path.name.endswith(suf):
            return path.name[: -len(suf)]
    return None


def read_meta(mouse_dir: Path) -> dict:
    p = mouse_dir / "meta.json"
    if not p.exists():
        return {}
    try:
        meta = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{p}: {exc}") from None
    return meta.get("videos", meta)


def scan_dataset(root) -> list[TrialRecord]:
    """All trials under ``root``, sorted by (mouse, video)."""
    root = Path(root)
    trials: dict[tuple[str, str], TrialRecord] = {}
    if not root.is_dir():
        return []
    for mouse_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        meta = read_meta(mouse_dir)
        for plane_dir in sorted(p for p in mouse_dir.iterdir() if p.is_dir()):
            pid = plane_id_of(plane_dir.name)
            if pid is None:
                continue
            for f in sorted(plane_dir.iterdir()):
                vid = _video_of(f)
                if vid is None:
                    continue
                key = (mouse_dir.name, vid)
                rec = trials.get(key)
                if rec is None:
                    info = meta.get(vid, {})
                    rec = trials[key] = TrialRecord(
                        mouse_dir.name, vid, str(info.get("video_type", "")), str(info.get("group", vid))
                    )
                rec.planes.setdefault(pid, f)
    return [trials[k] for k in sorted(trials)]


def write_meta(mouse_dir, videos: dict) -> None:
    Path(mouse_dir).mkdir(parents=True, exist_ok=True)
    (Path(mouse_dir) / "meta.json").write_text(json.dumps(videos, indent=2, sort_keys=True) + "\n")
