"""Intersection zigzags, toggle encoding and zigzag persistence."""

from .engine import compute_zigzag
from .graphzz import graph_zigzag_h0, mask_zigzag
from .oracle import oracle_arrow_rank, oracle_barcode, oracle_betti
from .sequence import (
    PersistenceInterval,
    ToggleFiltration,
    ZigzagSequence,
    build_sequence,
    dump_barcode,
    encode,
    encode_masks,
    select_dimension,
)

__all__ = [
    "PersistenceInterval",
    "ToggleFiltration",
    "ZigzagSequence",
    "build_sequence",
    "compute_zigzag",
    "dump_barcode",
    "encode",
    "encode_masks",
    "graph_zigzag_h0",
    "mask_zigzag",
    "oracle_arrow_rank",
    "oracle_barcode",
    "oracle_betti",
    "select_dimension",
]
