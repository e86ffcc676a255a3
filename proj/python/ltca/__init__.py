"""Sparse long-range temporal attention engine.

Thin wrapper over the _ltca extension: attention mask builders, the masked
encoder layer (dense oracle + sparse path), segmentation/score heads, and
receptive-field / cost analysis.
"""

from ._ltca import (
    AllowList,
    DegenerateRowError,
    Geometry,
    LayerParams,
    MaskSpec,
    Mlp,
    ParamError,
    QueryIndexError,
    ShapeError,
    assemble,
    attention_dense,
    attention_sparse,
    classify,
    compose_union,
    cost_report,
    gen_scene,
    init_queries_from_sentence,
    ltca_forward,
    pair_count,
    random_frame_set,
    reachability,
    realize,
    segment,
    select,
    sinusoidal_pe,
    verify_against_formula,
)

__all__ = [
    "AllowList",
    "DegenerateRowError",
    "Geometry",
    "LayerParams",
    "MaskSpec",
    "Mlp",
    "ParamError",
    "QueryIndexError",
    "ShapeError",
    "assemble",
    "attention_dense",
    "attention_sparse",
    "classify",
    "compose_union",
    "cost_report",
    "gen_scene",
    "init_queries_from_sentence",
    "ltca_forward",
    "pair_count",
    "random_frame_set",
    "reachability",
    "realize",
    "segment",
    "select",
    "sinusoidal_pe",
    "verify_against_formula",
]

__version__ = "0.1.0"
