"""FAST segment-test corner detection on the 16-pixel Bresenham circle."""

from __future__ import annotations

import numpy as np

from ..errors import ParameterError
from ..imaging import Image
from .base import Keypoint, peaks_to_keypoints

DEFAULT_T = 20
DEFAULT_ARC_LEN = 9
DEFAULT_NMS_RADIUS = 3.0

#: Bresenham circle of radius 3 as (dx, dy) offsets, clockwise from the top.
RING_OFFSETS = (
    (0, -3), (1, -3), (2, -2), (3, -1), (3, 0), (3, 1), (2, 2), (1, 3),
    (0, 3), (-1, 3), (-2, 2), (-3, 1), (-3, 0), (-3, -1), (-2, -2), (-1, -3),
)
_RING_RADIUS = 3


def _ring_stack(plane: np.ndarray) -> np.ndarray:
    """(16, h', w') stack of ring values for every interior pixel."""
    h, w = plane.shape
    r = _RING_RADIUS
    views = [
        plane[r + dy: h - r + dy, r + dx: w - r + dx]
        for dx, dy in RING_OFFSETS
    ]
    return np.stack(views)


def _has_run(flags: np.ndarray, arc_len: int) -> np.ndarray:
    """Pixels with >= arc_len contiguous True values on the circular ring."""
    ok = np.zeros(flags.shape[1:], dtype=bool)
    for start in range(16):
        run = flags[start]
        for j in range(1, arc_len):
            run = run & flags[(start + j) % 16]
            if not run.any():
                break
        else:
            ok |= run
    return ok


def _longest_run(flags16: np.ndarray) -> tuple[int, int]:
    """(start, length) of the longest circular run of True in a 16-vector."""
    if flags16.all():
        return 0, 16
    doubled = np.concatenate([flags16, flags16])
    best_start, best_len = 0, 0
    i = 0
    while i < 16:
        if doubled[i]:
            j = i
            while doubled[j]:
                j += 1
            if j - i > best_len:
                best_start, best_len = i, j - i
            i = j
        else:
            i += 1
    return best_start, best_len


def detect_fast(
    img: Image,
    t: int = DEFAULT_T,
    arc_len: int = DEFAULT_ARC_LEN,
    nms_radius: float = DEFAULT_NMS_RADIUS,
) -> list[Keypoint]:
    """Segment-test corners: a pixel qualifies when at least `arc_len`
    contiguous ring pixels are all brighter than p + t or all darker than
    p - t. The response is the sum of |ring - p| over the longest
    qualifying run. Intensities are compared in raw 8-bit units.
    """
    if t < 1:
        raise ParameterError(f"t must be >= 1, got {t}")
    if not 9 <= arc_len <= 12:
        raise ParameterError(f"arc_len must be in [9, 12], got {arc_len}")
    if nms_radius < 1:
        raise ParameterError(f"nms_radius must be >= 1, got {nms_radius}")

    plane = img.pixels.astype(np.int32)
    h, w = plane.shape
    r = _RING_RADIUS
    if h <= 2 * r or w <= 2 * r:
        return []

    ring = _ring_stack(plane)
    center = plane[r: h - r, r: w - r]
    brighter = ring > center + t
    darker = ring < center - t
    corner = _has_run(brighter, arc_len) | _has_run(darker, arc_len)

    resp = np.zeros_like(plane, dtype=np.float64)
    for yy, xx in zip(*np.nonzero(corner)):
        y, x = int(yy) + r, int(xx) + r
        p = plane[y, x]
        vals = np.array([plane[y + dy, x + dx] for dx, dy in RING_OFFSETS])
        best = 0.0
        for flags in (vals > p + t, vals < p - t):
            start, length = _longest_run(flags)
            if length >= arc_len:
                idx = [(start + j) % 16 for j in range(length)]
                best = max(best, float(np.abs(vals[idx] - p).sum()))
        resp[y, x] = best

    return peaks_to_keypoints(resp, 0.0, margin=r, nms_radius=nms_radius, scale=1.0)
