"""Shared detector machinery: the Keypoint type, response-peak extraction,
sub-pixel refinement, and non-maximum suppression.

All detectors share the same output contract: keypoints sorted by descending
response with ties broken by ascending (y, x), positions inside the image,
and no response computed where the filter footprint would leave the frame.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import maximum_filter

from ..errors import ValidationError
from ..imaging import Image

#: Gaussian kernels are truncated at this many standard deviations.
TRUNCATE = 3.0

#: Relative responses below this floor are treated as numerical noise.
RESPONSE_FLOOR = 1e-15


@dataclass(frozen=True)
class Keypoint:
    """Sub-pixel interest point: position, characteristic scale, response."""

    x: float
    y: float
    scale: float = 1.0
    response: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValidationError(f"keypoint position must be finite, got ({self.x}, {self.y})")
        if not math.isfinite(self.response):
            raise ValidationError("keypoint response must be finite")
        if self.scale < 1.0:
            raise ValidationError(f"keypoint scale must be >= 1.0, got {self.scale}")


def check_in_bounds(kp: Keypoint, dims) -> None:
    w, h = dims
    if not (0.0 <= kp.x < w and 0.0 <= kp.y < h):
        raise ValidationError(f"keypoint ({kp.x}, {kp.y}) outside {w}x{h} image")


def kernel_radius(sigma: float) -> int:
    """Pixel radius of a truncated Gaussian kernel, matching scipy's rule."""
    return int(TRUNCATE * sigma + 0.5)


def normalized(img: Image) -> np.ndarray:
    """Image intensities mapped to [0, 1] float64."""
    return img.pixels.astype(np.float64) / 255.0


def grid_maxima(resp: np.ndarray, threshold: float, margin: int) -> list[tuple[int, int]]:
    """(y, x) cells where resp exceeds threshold and no 8-neighbour is larger.

    Cells closer than `margin` to any border are excluded so that only
    full-footprint responses can produce keypoints.
    """
    margin = max(int(margin), 1)
    h, w = resp.shape
    if h - 2 * margin <= 0 or w - 2 * margin <= 0:
        return []
    mask = (resp > threshold) & (resp == maximum_filter(resp, size=3, mode="nearest"))
    mask[:margin, :] = False
    mask[-margin:, :] = False
    mask[:, :margin] = False
    mask[:, -margin:] = False
    ys, xs = np.nonzero(mask)
    return list(zip(ys.tolist(), xs.tolist()))


def parabola_offset(low: float, mid: float, high: float) -> float:
    """Vertex offset in [-0.5, 0.5] of the parabola through three samples."""
    denom = low - 2.0 * mid + high
    if denom == 0.0:
        return 0.0
    return float(np.clip(0.5 * (low - high) / denom, -0.5, 0.5))


def refine_peak(resp: np.ndarray, y: int, x: int) -> tuple[float, float]:
    """Per-axis quadratic refinement of a grid peak; returns (x, y) floats."""
    dx = parabola_offset(resp[y, x - 1], resp[y, x], resp[y, x + 1])
    dy = parabola_offset(resp[y - 1, x], resp[y, x], resp[y + 1, x])
    return x + dx, y + dy


def greedy_nms(candidates: list[Keypoint], radius: float) -> list[Keypoint]:
    """Keep the strongest keypoints so that no two survive within `radius`.

    Candidates must already be in output order (descending response, then
    ascending y, x), which makes the sweep deterministic.
    """
    kept: list[Keypoint] = []
    r2 = float(radius) * float(radius)
    for cand in candidates:
        if all((cand.x - k.x) ** 2 + (cand.y - k.y) ** 2 > r2 for k in kept):
            kept.append(cand)
    return kept


def sort_keypoints(keypoints) -> list[Keypoint]:
    return sorted(keypoints, key=lambda kp: (-kp.response, kp.y, kp.x))


def peaks_to_keypoints(
    resp: np.ndarray,
    threshold: float,
    margin: int,
    nms_radius: float,
    scale: float,
) -> list[Keypoint]:
    """Full single-scale pipeline: grid maxima, refinement, NMS, sorting."""
    cands = []
    for y, x in grid_maxima(resp, threshold, margin):
        xf, yf = refine_peak(resp, y, x)
        cands.append(Keypoint(x=xf, y=yf, scale=max(scale, 1.0), response=float(resp[y, x])))
    return greedy_nms(sort_keypoints(cands), nms_radius)
