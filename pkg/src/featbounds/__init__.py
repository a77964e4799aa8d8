"""featbounds: performance-bounds benchmarking for local feature detectors.

Generates parameterized degradation sweeps (JPEG compression, uniform
brightness decrease), scores detector repeatability against a ground-truth
homography, and aggregates max/min/median curves with operating and
guarantee region areas.
"""

from .bounds import (
    BoundsCurves,
    RepeatabilityMatrix,
    StepAxis,
    aggregate_curves,
    collect_matrix,
    read_matrix_csv,
    region_areas,
    stability_summary,
    write_matrix_csv,
)
from .detectors import (
    DetectorSpec,
    Keypoint,
    detect,
    detect_dog,
    detect_fast,
    detect_harris,
    detect_hessian,
    ingest_keypoints,
)
from .imaging import (
    Dataset,
    Image,
    TransformSpec,
    apply_brightness,
    apply_jpeg,
    build_dataset,
    default_schedule,
    load_dataset,
    load_image,
    save_image,
)
from .repeatability import (
    Homography,
    RepeatabilityResult,
    common_region_mask,
    match_keypoints,
    repeatability,
)
from .report import PlotStyle, read_curves_csv, render_bounds_plot, write_curves_csv

__version__ = "0.1.0"

__all__ = [
    "BoundsCurves",
    "Dataset",
    "DetectorSpec",
    "Homography",
    "Image",
    "Keypoint",
    "PlotStyle",
    "RepeatabilityMatrix",
    "RepeatabilityResult",
    "StepAxis",
    "TransformSpec",
    "aggregate_curves",
    "apply_brightness",
    "apply_jpeg",
    "build_dataset",
    "collect_matrix",
    "common_region_mask",
    "default_schedule",
    "detect",
    "detect_dog",
    "detect_fast",
    "detect_harris",
    "detect_hessian",
    "ingest_keypoints",
    "load_dataset",
    "load_image",
    "match_keypoints",
    "read_curves_csv",
    "read_matrix_csv",
    "region_areas",
    "render_bounds_plot",
    "repeatability",
    "save_image",
    "stability_summary",
    "write_curves_csv",
    "write_matrix_csv",
]
