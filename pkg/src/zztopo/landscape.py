"""Persistence landscapes over the layer-index axis, and per-trial descriptors."""

from __future__ import annotations

import csv
import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

ZLD_MAGIC = b"ZLD1"


@dataclass(frozen=True, eq=False)
class LandscapeVector:
    values: np.ndarray  # (K, R)

    @property
    def K(self) -> int:
        return self.values.shape[0]

    @property
    def R(self) -> int:
        return self.values.shape[1]

    @property
    def flat(self) -> np.ndarray:
        return self.values.ravel()


@dataclass(frozen=True, eq=False)
class Descriptor:
    vector: np.ndarray
    mouse_id: str = ""
    video_id: str = ""
    video_type: str = ""
    group: str = ""
    meta: dict = field(default_factory=dict)

    @property
    def trial_id(self) -> str:
        return f"{self.mouse_id}/{self.video_id}"

    def ids(self) -> dict:
        return dict(trial_id=self.trial_id, mouse_id=self.mouse_id, video_id=self.video_id,
                    video_type=self.video_type, group=self.group)


def _endpoints(bars):
    if len(bars) == 0:
        return np.zeros(0), np.zeros(0)
    arr = np.array([tuple(b)[-2:] for b in bars], dtype=float)
    return arr[:, 0], arr[:, 1]


def landscape(bars, L: int, R: int = 50, K: int = 5) -> LandscapeVector:
    """Sample the first K landscape functions at R points of [0, L-1].

    ``bars`` holds (birth, death) pairs or PersistenceIntervals (the last two
    fields are used); filter by dimension first.
    """
    if R < 2 or K < 1:
        raise ValueError("need R >= 2 and K >= 1")
    b, d = _endpoints(bars)
    if len(b) and (b.min() < 0 or d.max() > L - 1 or np.any(b > d)):
        raise ValueError("bars must satisfy 0 <= birth <= death <= L-1")
    t = np.linspace(0.0, L - 1, R)
    out = np.zeros((K, R))
    if len(b):
        tents = np.maximum(0.0, np.minimum(t[None, :] - b[:, None], d[:, None] - t[None, :]))
        tents = -np.sort(-tents, axis=0)
        k = min(K, len(b))
        out[:k] = tents[:k]
    return LandscapeVector(out)


def assemble_descriptor(per_plane, Z: int = 10, **ids) -> Descriptor:
    """Concatenate Z landscape vectors in ascending plane order.

    ``per_plane`` is a sequence in plane order or a {plane_id: vector} mapping
    that must cover planes 0..Z-1.
    """
    if isinstance(per_plane, dict):
        missing = [p for p in range(Z) if p not in per_plane]
        if missing or len(per_plane) != Z:
            raise ValueError(f"expected planes 0..{Z - 1}, missing {missing}")
        per_plane = [per_plane[p] for p in range(Z)]
    per_plane = list(per_plane)
    if len(per_plane) != Z:
        raise ValueError(f"expected {Z} planes, got {len(per_plane)}")
    mats = [np.asarray(v.values if isinstance(v, LandscapeVector) else v, dtype=float) for v in per_plane]
    if len({m.shape for m in mats}) != 1:
        raise ValueError("plane landscapes have different shapes")
    return Descriptor(np.concatenate([m.ravel() for m in mats]), **ids)


def store_descriptor(desc: Descriptor, path) -> None:
    """``path`` gets the ZLD1 vector; ``path`` + ``.json`` the identifiers."""
    path = Path(path)
    v = np.ascontiguousarray(desc.vector, dtype="<f4")
    path.write_bytes(ZLD_MAGIC + struct.pack("<I", len(v)) + v.tobytes())
    side = dict(desc.ids(), length=len(v), **desc.meta)
    Path(str(path) + ".json").write_text(json.dumps(side, indent=2, sort_keys=True) + "\n")


def load_descriptor(path) -> Descriptor:
    path = Path(path)
    data = path.read_bytes()
    if len(data) < 8 or data[:4] != ZLD_MAGIC:
        raise ValueError(f"{path}: not a ZLD1 file")
    (n,) = struct.unpack_from("<I", data, 4)
    if len(data) != 8 + 4 * n:
        raise ValueError(f"{path}: expected {n} values")
    vec = np.frombuffer(data, dtype="<f4", offset=8).astype(np.float64)
    side_path = Path(str(path) + ".json")
    side = json.loads(side_path.read_text()) if side_path.exists() else {}
    keys = ("mouse_id", "video_id", "video_type", "group")
    return Descriptor(vec, **{k: side.get(k, "") for k in keys},
                      meta={k: v for k, v in side.items() if k not in keys + ("trial_id", "length")})


def write_pooled_csv(descs, path) -> None:
    descs = list(descs)
    D = len(descs[0].vector) if descs else 0
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["trial_id", "video_id", "video_type", "mouse_id"] + [f"v{i}" for i in range(D)])
        for d in descs:
            vals = np.asarray(d.vector, dtype=np.float32)
            w.writerow([d.trial_id, d.video_id, d.video_type, d.mouse_id] + [repr(float(x)) for x in vals])


def read_pooled_csv(path) -> list[Descriptor]:
    out = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        next(reader)
        for row in reader:
            out.append(Descriptor(np.array(row[4:], dtype=float), mouse_id=row[3], video_id=row[1],
                                  video_type=row[2]))
    return out
