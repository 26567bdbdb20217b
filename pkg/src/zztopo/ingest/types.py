from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np


@dataclass(frozen=True)
class NeuronSample:
    neuron_id: int
    x: float
    y: float
    trace: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "trace", np.asarray(self.trace, dtype=float).ravel())
        if not (np.isfinite(self.x) and np.isfinite(self.y)):
            raise ValueError(f"neuron {self.neuron_id}: non-finite coordinates")


def _check_values(values: np.ndarray) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if values.ndim != 3 or values.shape[0] != values.shape[1]:
        raise ValueError(f"expected shape (n, n, T), got {values.shape}")
    n, _, T = values.shape
    if n < 2 or T < 2:
        raise ValueError("need n_grid >= 2 and T >= 2")
    if not np.all(np.isfinite(values)):
        raise ValueError("grid contains non-finite values")
    return values


@dataclass(frozen=True, eq=False)
class ActivityGrid:
    """Activity values on an n x n grid over T frames, shape (n, n, T)."""

    values: np.ndarray
    mouse_id: str = ""
    plane_id: int = 0
    video_id: str = ""
    video_type: str = ""

    def __post_init__(self):
        object.__setattr__(self, "values", _check_values(self.values))

    @property
    def n_grid(self) -> int:
        return self.values.shape[0]

    @property
    def n_frames(self) -> int:
        return self.values.shape[2]

    def ids(self) -> dict:
        return dict(mouse_id=self.mouse_id, plane_id=self.plane_id,
                    video_id=self.video_id, video_type=self.video_type)

    def with_values(self, values) -> "ActivityGrid":
        return replace(self, values=values)


@dataclass(frozen=True, eq=False)
class NormalizedField(ActivityGrid):
    """Relative activity (r - mean) / mean per pixel; same layout as ActivityGrid."""


class ControlKind(str, Enum):
    none = "none"
    frame_shuffle = "frame_shuffle"
    grid_scramble = "grid_scramble"


@dataclass(frozen=True)
class ControlSpec:
    kind: ControlKind = ControlKind.none
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", ControlKind(self.kind))
