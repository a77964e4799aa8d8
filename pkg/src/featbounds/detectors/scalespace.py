"""Scale-space blob detectors: difference-of-Gaussians extrema and
scale-normalized determinant-of-Hessian maxima.

Both detectors evaluate a geometric sigma ladder at full image resolution
(no spatial subsampling between octaves). This keeps scale sampling
consistent across octave boundaries, so extrema whose scale falls near a
boundary are not lost to resampling noise, and reported coordinates are
native image pixels.
"""

from __future__ import annotations

import numpy as np
from scipy.ndimage import gaussian_filter, maximum_filter, minimum_filter

from ..errors import InputTooSmallError, ParameterError
from ..imaging import Image
from .base import (
    TRUNCATE,
    Keypoint,
    kernel_radius,
    normalized,
    refine_peak,
    sort_keypoints,
)

DEFAULT_OCTAVES = 4
DEFAULT_SCALES_PER_OCTAVE = 3
DEFAULT_SIGMA0 = 1.6
DEFAULT_CONTRAST_THRESHOLD = 0.03
DEFAULT_EDGE_RATIO = 10.0
DEFAULT_HESSIAN_THRESHOLD = 1e-4

#: Minimum image side length for any pyramid detector.
MIN_IMAGE_SIDE = 16

_RING8 = np.array([[1, 1, 1], [1, 0, 1], [1, 1, 1]], dtype=bool)


def _check_pyramid_args(img: Image, octaves: int, scales_per_octave: int, sigma0: float) -> None:
    if octaves < 1:
        raise ParameterError(f"octaves must be >= 1, got {octaves}")
    if scales_per_octave < 2:
        raise ParameterError(f"scales_per_octave must be >= 2, got {scales_per_octave}")
    if sigma0 <= 0:
        raise ParameterError(f"sigma0 must be positive, got {sigma0}")
    if img.width < MIN_IMAGE_SIDE or img.height < MIN_IMAGE_SIDE:
        raise InputTooSmallError(
            f"image {img.width}x{img.height} is below the {MIN_IMAGE_SIDE}x{MIN_IMAGE_SIDE} minimum"
        )


def ladder_sigmas(octaves: int, scales_per_octave: int, sigma0: float, extra: int) -> list[float]:
    """Geometric sigma ladder sigma0 * 2^(j/s) covering `octaves` doublings,
    plus `extra` guard levels at the top for extremum neighborhoods."""
    k = 2.0 ** (1.0 / scales_per_octave)
    n = octaves * scales_per_octave
    return [sigma0 * k**j for j in range(n + extra)]


def _neighbour_extremes(d0, d1, d2):
    """Max and min over the 26 neighbours of each cell of the middle level."""
    nb_max = np.maximum(
        maximum_filter(d1, footprint=_RING8, mode="nearest"),
        np.maximum(
            maximum_filter(d0, size=3, mode="nearest"),
            maximum_filter(d2, size=3, mode="nearest"),
        ),
    )
    nb_min = np.minimum(
        minimum_filter(d1, footprint=_RING8, mode="nearest"),
        np.minimum(
            minimum_filter(d0, size=3, mode="nearest"),
            minimum_filter(d2, size=3, mode="nearest"),
        ),
    )
    return nb_max, nb_min


def _level_mask(shape, margin: int) -> np.ndarray:
    mask = np.zeros(shape, dtype=bool)
    margin = max(margin, 1)
    if shape[0] > 2 * margin and shape[1] > 2 * margin:
        mask[margin:-margin, margin:-margin] = True
    return mask


def _passes_edge_test(d1: np.ndarray, y: int, x: int, edge_ratio: float) -> bool:
    v = d1[y, x]
    dxx = d1[y, x + 1] - 2.0 * v + d1[y, x - 1]
    dyy = d1[y + 1, x] - 2.0 * v + d1[y - 1, x]
    dxy = 0.25 * (d1[y + 1, x + 1] - d1[y + 1, x - 1] - d1[y - 1, x + 1] + d1[y - 1, x - 1])
    tr = dxx + dyy
    det = dxx * dyy - dxy * dxy
    if det <= 0.0:
        return False
    return tr * tr * edge_ratio < (edge_ratio + 1.0) ** 2 * det


def detect_dog(
    img: Image,
    octaves: int = DEFAULT_OCTAVES,
    scales_per_octave: int = DEFAULT_SCALES_PER_OCTAVE,
    sigma0: float = DEFAULT_SIGMA0,
    contrast_threshold: float = DEFAULT_CONTRAST_THRESHOLD,
    edge_ratio: float = DEFAULT_EDGE_RATIO,
) -> list[Keypoint]:
    """3-D local extrema of the difference-of-Gaussians stack.

    Extrema are rejected when the DoG magnitude falls below
    `contrast_threshold` or the principal-curvature ratio exceeds
    `edge_ratio`. The reported response is the DoG magnitude; the scale is
    the extremum level's Gaussian sigma.
    """
    _check_pyramid_args(img, octaves, scales_per_octave, sigma0)
    f = normalized(img)
    sig = ladder_sigmas(octaves, scales_per_octave, sigma0, extra=3)
    gauss = [gaussian_filter(f, s, truncate=TRUNCATE) for s in sig]
    dog = [gauss[j + 1] - gauss[j] for j in range(len(gauss) - 1)]

    keypoints = []
    for j in range(1, len(dog) - 1):
        margin = kernel_radius(sig[j + 2]) + 1
        if 2 * margin >= min(img.height, img.width):
            break
        d0, d1, d2 = dog[j - 1], dog[j], dog[j + 1]
        nb_max, nb_min = _neighbour_extremes(d0, d1, d2)
        extremal = (d1 > nb_max) | (d1 < nb_min)
        mask = extremal & (np.abs(d1) >= contrast_threshold) & _level_mask(d1.shape, margin)
        for y, x in zip(*np.nonzero(mask)):
            y, x = int(y), int(x)
            if not _passes_edge_test(d1, y, x, edge_ratio):
                continue
            xf, yf = refine_peak(d1, y, x)
            keypoints.append(
                Keypoint(x=xf, y=yf, scale=max(sig[j], 1.0), response=float(abs(d1[y, x])))
            )
    return sort_keypoints(keypoints)


def detect_hessian(
    img: Image,
    octaves: int = DEFAULT_OCTAVES,
    scales_per_octave: int = DEFAULT_SCALES_PER_OCTAVE,
    sigma0: float = DEFAULT_SIGMA0,
    threshold: float = DEFAULT_HESSIAN_THRESHOLD,
) -> list[Keypoint]:
    """3-D local maxima of sigma^4 * det(Hessian) above `threshold`.

    Second derivatives are Gaussian-derivative responses at each ladder
    sigma; the sigma^4 factor makes responses comparable across scales.
    """
    _check_pyramid_args(img, octaves, scales_per_octave, sigma0)
    f = normalized(img)
    sig = ladder_sigmas(octaves, scales_per_octave, sigma0, extra=2)

    responses = []
    for s in sig:
        lxx = gaussian_filter(f, s, order=(0, 2), truncate=TRUNCATE)
        lyy = gaussian_filter(f, s, order=(2, 0), truncate=TRUNCATE)
        lxy = gaussian_filter(f, s, order=(1, 1), truncate=TRUNCATE)
        responses.append(s**4 * (lxx * lyy - lxy * lxy))

    keypoints = []
    for j in range(1, len(responses) - 1):
        margin = kernel_radius(sig[j + 1]) + 1
        if 2 * margin >= min(img.height, img.width):
            break
        r0, r1, r2 = responses[j - 1], responses[j], responses[j + 1]
        nb_max, _ = _neighbour_extremes(r0, r1, r2)
        mask = (r1 > nb_max) & (r1 > threshold) & _level_mask(r1.shape, margin)
        for y, x in zip(*np.nonzero(mask)):
            y, x = int(y), int(x)
            xf, yf = refine_peak(r1, y, x)
            keypoints.append(
                Keypoint(x=xf, y=yf, scale=max(sig[j], 1.0), response=float(r1[y, x]))
            )
    return sort_keypoints(keypoints)
