"""Harris corner detection: det(M) - k*trace(M)^2 on the smoothed structure tensor."""

from __future__ import annotations

import numpy as np
from scipy.ndimage import gaussian_filter

from ..errors import ParameterError
from ..imaging import Image
from .base import (
    RESPONSE_FLOOR,
    TRUNCATE,
    Keypoint,
    kernel_radius,
    normalized,
    peaks_to_keypoints,
)

DEFAULT_SIGMA_D = 1.0
DEFAULT_SIGMA_I = 2.0
DEFAULT_K = 0.04
DEFAULT_NMS_RADIUS = 3.0

#: Default threshold as a fraction of the maximum response in the image.
DEFAULT_REL_THRESHOLD = 1e-6


def harris_response(f: np.ndarray, sigma_d: float, sigma_i: float, k: float) -> np.ndarray:
    """Harris measure over a [0, 1] intensity plane.

    Derivatives are Gaussian derivatives at `sigma_d`; the squared-gradient
    products are integrated with a Gaussian window at `sigma_i`.
    """
    iy = gaussian_filter(f, sigma_d, order=(1, 0), truncate=TRUNCATE)
    ix = gaussian_filter(f, sigma_d, order=(0, 1), truncate=TRUNCATE)
    sxx = gaussian_filter(ix * ix, sigma_i, truncate=TRUNCATE)
    syy = gaussian_filter(iy * iy, sigma_i, truncate=TRUNCATE)
    sxy = gaussian_filter(ix * iy, sigma_i, truncate=TRUNCATE)
    return sxx * syy - sxy * sxy - k * (sxx + syy) ** 2


def detect_harris(
    img: Image,
    sigma_d: float = DEFAULT_SIGMA_D,
    sigma_i: float = DEFAULT_SIGMA_I,
    k: float = DEFAULT_K,
    threshold: float | None = None,
    nms_radius: float = DEFAULT_NMS_RADIUS,
) -> list[Keypoint]:
    """Local maxima of the Harris measure above `threshold`.

    `threshold=None` selects the default relative rule: 1e-6 of the maximum
    response in this image (with a small absolute floor so featureless
    images yield nothing). Keypoints carry scale = sigma_i.
    """
    if sigma_d <= 0 or sigma_i <= 0:
        raise ParameterError(f"sigmas must be positive, got sigma_d={sigma_d}, sigma_i={sigma_i}")
    if nms_radius < 1:
        raise ParameterError(f"nms_radius must be >= 1, got {nms_radius}")
    resp = harris_response(normalized(img), sigma_d, sigma_i, k)
    if threshold is None:
        threshold = max(DEFAULT_REL_THRESHOLD * float(resp.max()), RESPONSE_FLOOR)
    margin = kernel_radius(sigma_d) + kernel_radius(sigma_i)
    return peaks_to_keypoints(resp, threshold, margin, nms_radius, scale=sigma_i)
