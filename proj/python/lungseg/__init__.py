"""Two-stage pathological lung segmentation for CT volumes.

Stage one extracts normal parenchyma by fuzzy connectedness from
automatically selected seeds; stage two partitions the remaining rib-cage
search space into supervoxels and classifies texture descriptors at their
centroids with a random forest to recover abnormal regions.
"""

from ._lungseg import (
    ForestModel,
    LabelMask,
    LungsegError,
    PipelineConfig,
    PipelineResult,
    SupervoxelMap,
    Volume,
    binarize,
    build_phantom_training_set,
    build_search_space,
    compute_connectivity,
    dice,
    extract_descriptor,
    feature_names,
    generate_phantom,
    load_forest,
    load_mask,
    load_volume,
    oob_accuracy,
    run_pipeline,
    run_slic,
    save_mask,
    save_volume,
    select_seeds,
    threshold,
    train_forest,
)

__all__ = [
    "ForestModel",
    "LabelMask",
    "LungsegError",
    "PipelineConfig",
    "PipelineResult",
    "SupervoxelMap",
    "Volume",
    "binarize",
    "build_phantom_training_set",
    "build_search_space",
    "compute_connectivity",
    "dice",
    "extract_descriptor",
    "feature_names",
    "generate_phantom",
    "load_forest",
    "load_mask",
    "load_volume",
    "oob_accuracy",
    "run_pipeline",
    "run_slic",
    "save_mask",
    "save_volume",
    "select_seeds",
    "threshold",
    "train_forest",
]
