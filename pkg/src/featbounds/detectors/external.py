"""Ingestion of externally produced keypoints from the CSV interchange format.

Format: UTF-8, first line exactly ``x,y,scale,response``, one keypoint per
following line as decimal-dot floats, LF line endings. External sweeps name
their files ``<scene_id>_step<k>.csv`` with k counting steps from 1.
"""

from __future__ import annotations

from pathlib import Path

from ..errors import ParseError, ValidationError
from .base import Keypoint, check_in_bounds

KEYPOINT_HEADER = "x,y,scale,response"


def external_keypoint_path(directory, scene_id: str, step_index: int) -> Path:
    """File path for the keypoints of a scene's step (0-based index)."""
    return Path(directory) / f"{scene_id}_step{step_index + 1}.csv"


def ingest_keypoints(path, dims=None) -> list[Keypoint]:
    """Parse a keypoint CSV, preserving file order.

    When `dims` (width, height) is given, coordinates are checked against
    the image bounds and violations raise ValidationError.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines or lines[0].strip() != KEYPOINT_HEADER:
        raise ParseError(f"expected header {KEYPOINT_HEADER!r} in {path}", line=1)

    keypoints = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split(",")
        if len(fields) != 4:
            raise ParseError(f"expected 4 fields, got {len(fields)} in {path}", line=lineno)
        try:
            x, y, scale, response = (float(v) for v in fields)
        except ValueError as exc:
            raise ParseError(f"bad number in {path}: {exc}", line=lineno) from None
        try:
            kp = Keypoint(x=x, y=y, scale=scale, response=response)
            if dims is not None:
                check_in_bounds(kp, dims)
        except ValidationError as exc:
            raise ValidationError(f"{path} line {lineno}: {exc}") from None
        keypoints.append(kp)
    return keypoints


def write_keypoints_csv(keypoints, path) -> None:
    """Write keypoints in the interchange format (LF line endings)."""
    lines = [KEYPOINT_HEADER]
    lines += [f"{kp.x!r},{kp.y!r},{kp.scale!r},{kp.response!r}" for kp in keypoints]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
