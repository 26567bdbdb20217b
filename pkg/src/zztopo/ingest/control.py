"""Frame-shuffle and grid-scramble controls.

Permutations are derived from (seed, video key) only, so every plane of a
video gets the same frame permutation, and each (video, plane) gets its own
pixel permutation that is shared across frames.
"""

from __future__ import annotations

import zlib

import numpy as np

from .types import ControlKind, ControlSpec, NormalizedField


def _rng(seed: int, key: str) -> np.random.Generator:
    return np.random.default_rng([int(seed) & 0xFFFFFFFF, zlib.crc32(key.encode())])


def frame_permutation(seed: int, mouse_id, video_id, T: int) -> np.ndarray:
    return _rng(seed, f"frames/{mouse_id}/{video_id}").permutation(T)


def grid_permutation(seed: int, mouse_id, video_id, plane_id, n_pixels: int) -> np.ndarray:
    return _rng(seed, f"pixels/{mouse_id}/{video_id}/{plane_id}").permutation(n_pixels)


def permute_frames(values: np.ndarray, perm) -> np.ndarray:
    """out[..., t] = values[..., perm[t]]."""
    return values[..., np.asarray(perm)]


def permute_pixels(values: np.ndarray, perm) -> np.ndarray:
    """Flattened pixel i of the output is pixel perm[i] of the input, at every frame."""
    n, _, T = values.shape
    flat = values.reshape(n * n, T)
    return flat[np.asarray(perm)].reshape(n, n, T)


def apply_control(field: NormalizedField, spec: ControlSpec) -> NormalizedField:
    kind = ControlKind(spec.kind)
    v = field.values
    if kind is ControlKind.none:
        return field
    if kind is ControlKind.frame_shuffle:
        perm = frame_permutation(spec.seed, field.mouse_id, field.video_id, v.shape[2])
        return field.with_values(permute_frames(v, perm))
    perm = grid_permutation(spec.seed, field.mouse_id, field.video_id, field.plane_id, v.shape[0] ** 2)
    return field.with_values(permute_pixels(v, perm))
