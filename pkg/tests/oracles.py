"""Independent brute-force oracles used to derive expected test values.

Everything here is deliberately written from scratch: hand-built Gaussian
kernels with plain numpy convolution, per-pixel loops, and exhaustive
search, so the oracles share no code path with the package implementations
they check.
"""

import statistics

import numpy as np


def gaussian_kernel(sigma: float) -> np.ndarray:
    radius = max(1, int(3.0 * sigma + 0.5))
    xs = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-(xs**2) / (2.0 * sigma**2))
    return k / k.sum()


def blur(img: np.ndarray, sigma: float) -> np.ndarray:
    """Separable Gaussian blur with edge padding, via np.convolve."""
    k = gaussian_kernel(sigma)
    r = (len(k) - 1) // 2
    padded = np.pad(img.astype(np.float64), r, mode="edge")
    rows = np.array([np.convolve(row, k, mode="valid") for row in padded])
    cols = np.array([np.convolve(col, k, mode="valid") for col in rows.T]).T
    return cols


def central_diff(img: np.ndarray, axis: int) -> np.ndarray:
    out = np.zeros_like(img)
    if axis == 0:
        out[1:-1, :] = 0.5 * (img[2:, :] - img[:-2, :])
    else:
        out[:, 1:-1] = 0.5 * (img[:, 2:] - img[:, :-2])
    return out


def harris_response_bruteforce(img_u8, sigma_d, sigma_i, k) -> np.ndarray:
    """Harris measure from blurred central differences (not Gaussian derivatives)."""
    f = img_u8.astype(np.float64) / 255.0
    smooth = blur(f, sigma_d)
    ix = central_diff(smooth, axis=1)
    iy = central_diff(smooth, axis=0)
    sxx = blur(ix * ix, sigma_i)
    syy = blur(iy * iy, sigma_i)
    sxy = blur(ix * iy, sigma_i)
    return sxx * syy - sxy * sxy - k * (sxx + syy) ** 2


def top_maxima(resp: np.ndarray, count: int, border: int = 2):
    """The `count` strongest interior local maxima as (y, x) tuples."""
    h, w = resp.shape
    found = []
    for y in range(border, h - border):
        for x in range(border, w - border):
            v = resp[y, x]
            if v >= resp[y - 1:y + 2, x - 1:x + 2].max():
                found.append((v, y, x))
    found.sort(key=lambda t: (-t[0], t[1], t[2]))
    return [(y, x) for _, y, x in found[:count]]


SEGMENT_RING = (
    (0, -3), (1, -3), (2, -2), (3, -1), (3, 0), (3, 1), (2, 2), (1, 3),
    (0, 3), (-1, 3), (-2, 2), (-3, 1), (-3, 0), (-3, -1), (-2, -2), (-1, -3),
)


def segment_test_corners(img_u8, t: int, arc_len: int) -> set:
    """Exhaustive per-pixel segment test; returns {(y, x)} corner pixels."""
    h, w = img_u8.shape
    plane = img_u8.astype(int)
    corners = set()
    for y in range(3, h - 3):
        for x in range(3, w - 3):
            p = plane[y, x]
            ring = [plane[y + dy, x + dx] for dx, dy in SEGMENT_RING]
            for flags in ([v > p + t for v in ring], [v < p - t for v in ring]):
                doubled = flags + flags
                run = 0
                best = 0
                for flag in doubled:
                    run = run + 1 if flag else 0
                    best = max(best, run)
                if min(best, 16) >= arc_len:
                    corners.add((y, x))
                    break
    return corners


def dense_dog_search(img_u8, sigma_lo, sigma_hi, n_sigmas, ratio):
    """Global maximum of |blur(k*sigma) - blur(sigma)| over a dense sigma grid.

    Returns (x, y, sigma, magnitude) of the strongest response.
    """
    f = img_u8.astype(np.float64) / 255.0
    best = (0, 0, sigma_lo, -1.0)
    for sigma in np.geomspace(sigma_lo, sigma_hi, n_sigmas):
        d = np.abs(blur(f, ratio * sigma) - blur(f, sigma))
        y, x = np.unravel_index(np.argmax(d), d.shape)
        if d[y, x] > best[3]:
            best = (int(x), int(y), float(sigma), float(d[y, x]))
    return best


def dense_hessian_search(img_u8, sigma_lo, sigma_hi, n_sigmas):
    """Global maximum of sigma^4 det(Hessian) via finite differences."""
    f = img_u8.astype(np.float64) / 255.0
    best = (0, 0, sigma_lo, -np.inf)
    for sigma in np.geomspace(sigma_lo, sigma_hi, n_sigmas):
        g = blur(f, sigma)
        gx = central_diff(g, axis=1)
        gy = central_diff(g, axis=0)
        gxx = central_diff(gx, axis=1)
        gyy = central_diff(gy, axis=0)
        gxy = central_diff(gx, axis=0)
        det = sigma**4 * (gxx * gyy - gxy * gxy)
        y, x = np.unravel_index(np.argmax(det), det.shape)
        if det[y, x] > best[3]:
            best = (int(x), int(y), float(sigma), float(det[y, x]))
    return best


def max_matching_cardinality(ref_pts, tgt_pts, tol: float) -> int:
    """Exhaustive maximum-cardinality one-to-one matching under a distance cap."""
    feasible = []
    for rx, ry in ref_pts:
        row = [
            j
            for j, (tx, ty) in enumerate(tgt_pts)
            if (rx - tx) ** 2 + (ry - ty) ** 2 <= tol * tol
        ]
        feasible.append(row)

    def search(i: int, used: frozenset) -> int:
        if i == len(feasible):
            return 0
        best = search(i + 1, used)
        for j in feasible[i]:
            if j not in used:
                best = max(best, 1 + search(i + 1, used | {j}))
        return best

    return search(0, frozenset())


def median_oracle(values) -> float:
    return float(statistics.median(values))


def psnr(a_u8, b_u8) -> float:
    mse = np.mean((a_u8.astype(np.float64) - b_u8.astype(np.float64)) ** 2)
    if mse == 0:
        return float("inf")
    return 10.0 * np.log10(255.0**2 / mse)
