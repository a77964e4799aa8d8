"""Repeatability scoring between keypoint sets under a ground-truth homography.

The score is the fraction of reference keypoints inside the common region
that are re-detected in the target image, using a one-to-one center-distance
correspondence.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError, UndefinedScoreError, ValidationError

#: Default correspondence tolerance in pixels (center distance).
DEFAULT_TOLERANCE = 2.5

IDENTITY_VALUES = (1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0)


@dataclass(frozen=True)
class Homography:
    """Row-major 3x3 projective mapping from reference to target coordinates."""

    h: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.h)
        if len(vals) != 9:
            raise ValidationError(f"homography needs 9 values, got {len(vals)}")
        if not all(np.isfinite(vals)):
            raise ValidationError("homography values must be finite")
        object.__setattr__(self, "h", vals)
        m = self.matrix()
        if vals[8] != 0.0:
            m = m / vals[8]
        if abs(np.linalg.det(m)) <= 1e-12:
            raise ValidationError("homography is not invertible")

    @classmethod
    def identity(cls) -> "Homography":
        return cls(IDENTITY_VALUES)

    def matrix(self) -> np.ndarray:
        return np.array(self.h, dtype=np.float64).reshape(3, 3)

    def inverse(self) -> "Homography":
        return Homography(tuple(np.linalg.inv(self.matrix()).ravel()))

    def apply(self, points: np.ndarray) -> np.ndarray:
        """Map an (n, 2) array of (x, y) points; returns the same shape."""
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        ones = np.ones((pts.shape[0], 1))
        proj = np.hstack([pts, ones]) @ self.matrix().T
        return proj[:, :2] / proj[:, 2:3]


@dataclass(frozen=True)
class RepeatabilityResult:
    """Outcome of one reference/target comparison."""

    n_ref: int
    n_rep: int
    score: float
    matches: tuple[tuple[int, int, float], ...] = field(default=())

    def __post_init__(self):
        if not 0 <= self.n_rep <= self.n_ref:
            raise ValidationError("need 0 <= n_rep <= n_ref")
        if self.n_ref > 0 and self.score != self.n_rep / self.n_ref:
            raise ValidationError("score must equal n_rep / n_ref")
        ref_idx = [m[0] for m in self.matches]
        tgt_idx = [m[1] for m in self.matches]
        if len(set(ref_idx)) != len(ref_idx) or len(set(tgt_idx)) != len(tgt_idx):
            raise ValidationError("matches must be one-to-one")


def _xy(keypoints) -> np.ndarray:
    return np.array([(kp.x, kp.y) for kp in keypoints], dtype=np.float64).reshape(-1, 2)


def _in_bounds(points: np.ndarray, dims) -> np.ndarray:
    w, h = dims
    x, y = points[:, 0], points[:, 1]
    return (x >= 0.0) & (x < w) & (y >= 0.0) & (y < h)


def common_region_mask(h: Homography, ref_dims, tgt_dims):
    """Predicate over reference (x, y): inside the reference frame and
    projecting inside the target frame."""

    def predicate(x: float, y: float) -> bool:
        pt = np.array([[x, y]], dtype=np.float64)
        return bool(_in_bounds(pt, ref_dims)[0] and _in_bounds(h.apply(pt), tgt_dims)[0])

    return predicate


def _common_mask_array(points: np.ndarray, h: Homography, ref_dims, tgt_dims) -> np.ndarray:
    if points.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    return _in_bounds(points, ref_dims) & _in_bounds(h.apply(points), tgt_dims)


def match_keypoints(ref, tgt, h: Homography, tol: float):
    """Greedy one-to-one matching of projected reference points to targets.

    Candidate pairs within `tol` pixels are visited by ascending distance
    (ties broken by reference index, then target index); a pair is accepted
    when both endpoints are still unused. Returns (ref_index, tgt_index,
    distance) triples in acceptance order.
    """
    if tol <= 0:
        raise ParameterError(f"tolerance must be positive, got {tol}")
    if len(ref) == 0 or len(tgt) == 0:
        return []
    proj = h.apply(_xy(ref))
    tpts = _xy(tgt)
    d = np.sqrt(((proj[:, None, :] - tpts[None, :, :]) ** 2).sum(axis=2))
    ri, ti = np.nonzero(d <= tol)
    order = sorted(range(len(ri)), key=lambda i: (d[ri[i], ti[i]], ri[i], ti[i]))
    ref_used = set()
    tgt_used = set()
    matches = []
    for i in order:
        r, t = int(ri[i]), int(ti[i])
        if r in ref_used or t in tgt_used:
            continue
        ref_used.add(r)
        tgt_used.add(t)
        matches.append((r, t, float(d[r, t])))
    return matches


def repeatability(ref, tgt, h: Homography, tol: float, ref_dims, tgt_dims) -> RepeatabilityResult:
    """Score of the target keypoint set against the reference set.

    Reference points are restricted to the common region; target points are
    kept when their back-projection lies in the common region. Indices in the
    result refer to the original input lists. Raises UndefinedScoreError when
    no reference point survives the restriction.
    """
    if tol <= 0:
        raise ParameterError(f"tolerance must be positive, got {tol}")
    ref_pts = _xy(ref)
    tgt_pts = _xy(tgt)
    ref_keep = np.nonzero(_common_mask_array(ref_pts, h, ref_dims, tgt_dims))[0]
    if tgt_pts.shape[0]:
        back = h.inverse().apply(tgt_pts)
        tgt_keep = np.nonzero(_common_mask_array(back, h, ref_dims, tgt_dims))[0]
    else:
        tgt_keep = np.zeros(0, dtype=int)

    n_ref = len(ref_keep)
    if n_ref == 0:
        raise UndefinedScoreError("no reference keypoints in the common region")

    sub_matches = match_keypoints([ref[i] for i in ref_keep], [tgt[i] for i in tgt_keep], h, tol)
    matches = tuple((int(ref_keep[r]), int(tgt_keep[t]), dist) for r, t, dist in sub_matches)
    n_rep = len(matches)
    return RepeatabilityResult(n_ref=n_ref, n_rep=n_rep, score=n_rep / n_ref, matches=matches)
