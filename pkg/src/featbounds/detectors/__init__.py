"""Keypoint detectors and external-keypoint ingestion.

Four native detectors (Harris corners, FAST segment-test corners,
difference-of-Gaussians extrema, determinant-of-Hessian blobs) share one
output contract; externally produced keypoints enter through the CSV
ingestion path so detectors without a native implementation can still be
evaluated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType

from ..errors import ParameterError
from ..imaging import Image
from .base import Keypoint, check_in_bounds, sort_keypoints
from .external import (
    KEYPOINT_HEADER,
    external_keypoint_path,
    ingest_keypoints,
    write_keypoints_csv,
)
from .fast import detect_fast
from .harris import detect_harris
from .scalespace import detect_dog, detect_hessian

__all__ = [
    "Keypoint",
    "DetectorSpec",
    "DETECTOR_NAMES",
    "DEFAULT_PARAMS",
    "KEYPOINT_HEADER",
    "check_in_bounds",
    "detect",
    "detect_harris",
    "detect_fast",
    "detect_dog",
    "detect_hessian",
    "external_keypoint_path",
    "ingest_keypoints",
    "sort_keypoints",
    "write_keypoints_csv",
]

EXTERNAL = "ext"
NATIVE_DETECTOR_NAMES = ("harris", "fast", "dog", "hessian")
DETECTOR_NAMES = NATIVE_DETECTOR_NAMES + (EXTERNAL,)

#: Fixed, documented defaults; evaluation never tunes these per image.
DEFAULT_PARAMS = MappingProxyType(
    {
        "harris": MappingProxyType(
            {"sigma_d": 1.0, "sigma_i": 2.0, "k": 0.04, "threshold": None, "nms_radius": 3.0}
        ),
        "fast": MappingProxyType({"t": 20, "arc_len": 9, "nms_radius": 3.0}),
        "dog": MappingProxyType(
            {
                "octaves": 4,
                "scales_per_octave": 3,
                "sigma0": 1.6,
                "contrast_threshold": 0.03,
                "edge_ratio": 10.0,
            }
        ),
        "hessian": MappingProxyType(
            {"octaves": 4, "scales_per_octave": 3, "sigma0": 1.6, "threshold": 1e-4}
        ),
        EXTERNAL: MappingProxyType({}),
    }
)

_DETECT_FUNCS = {
    "harris": detect_harris,
    "fast": detect_fast,
    "dog": detect_dog,
    "hessian": detect_hessian,
}


@dataclass(frozen=True)
class DetectorSpec:
    """A detector choice plus its parameter overrides.

    External keypoints require `keypoint_dir`, the directory holding
    ``<scene_id>_step<k>.csv`` files.
    """

    name: str
    params: dict = field(default_factory=dict)
    keypoint_dir: Path | None = None

    def __post_init__(self):
        if self.name not in DETECTOR_NAMES:
            raise ParameterError(
                f"unknown detector {self.name!r}; expected one of {', '.join(DETECTOR_NAMES)}"
            )
        unknown = set(self.params) - set(DEFAULT_PARAMS[self.name])
        if unknown:
            raise ParameterError(
                f"unknown {self.name} parameter(s): {', '.join(sorted(unknown))}"
            )
        if self.name == EXTERNAL and self.keypoint_dir is None:
            raise ParameterError("external detector requires keypoint_dir")
        if self.keypoint_dir is not None:
            object.__setattr__(self, "keypoint_dir", Path(self.keypoint_dir))

    @property
    def is_external(self) -> bool:
        return self.name == EXTERNAL

    def resolved_params(self) -> dict:
        merged = dict(DEFAULT_PARAMS[self.name])
        merged.update(self.params)
        return merged


def detect(img: Image, spec: DetectorSpec) -> list[Keypoint]:
    """Run a native detector described by `spec` on an image."""
    if spec.is_external:
        raise ParameterError("external keypoints are ingested per step, not detected")
    return _DETECT_FUNCS[spec.name](img, **spec.resolved_params())
