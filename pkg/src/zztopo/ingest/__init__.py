"""Loading, gridding, normalization and control perturbations of activity data."""

from .control import apply_control, frame_permutation, grid_permutation, permute_frames, permute_pixels
from .formats import (
    FormatError,
    TrialRecord,
    load_grid,
    load_grid_csv,
    load_samples_csv,
    scan_dataset,
    store_grid,
    store_grid_csv,
    store_samples_csv,
    write_meta,
)
from .raster import field_from_samples, normalize, rasterize, samples_from_arrays, trim_frames
from .types import ActivityGrid, ControlKind, ControlSpec, NeuronSample, NormalizedField

__all__ = [
    "ActivityGrid", "ControlKind", "ControlSpec", "FormatError", "NeuronSample", "NormalizedField",
    "TrialRecord", "apply_control", "field_from_samples", "frame_permutation", "grid_permutation",
    "load_grid", "load_grid_csv", "load_samples_csv", "normalize", "permute_frames", "permute_pixels",
    "rasterize", "samples_from_arrays", "scan_dataset", "store_grid", "store_grid_csv",
    "store_samples_csv", "trim_frames", "write_meta",
]
