"""Performance-bounds aggregation: repeatability matrices, max/min/median
curves, and the operating/guarantee region areas.

The matrix holds one repeatability score per (scene, transformation step);
per-step order statistics over scenes give the three curves. The area
between max and min is the operating region (instability across image
content); the area under min is the guarantee region (worst-case floor).
"""

from __future__ import annotations

import csv
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial

from .detectors import DetectorSpec, detect, external_keypoint_path, ingest_keypoints
from .errors import ConfigError, DegenerateColumnError, ParseError, ValidationError
from .imaging import Dataset, load_image
from .repeatability import UndefinedScoreError, repeatability

MATRIX_CSV_HEADER = ("scene_id", "step_amount", "score")
AREA_TOLERANCE = 1e-12


@dataclass(frozen=True)
class StepAxis:
    """The ordered transformation amounts of one sweep."""

    amounts: tuple[float, ...]

    def __post_init__(self):
        amounts = tuple(float(a) for a in self.amounts)
        if len(amounts) < 2:
            raise ValidationError("a step axis needs at least 2 steps")
        if amounts[0] != 0.0:
            raise ValidationError("the first step must be 0 (untransformed reference)")
        if any(b <= a for a, b in zip(amounts, amounts[1:])):
            raise ValidationError("step amounts must be strictly increasing")
        object.__setattr__(self, "amounts", amounts)

    @property
    def m(self) -> int:
        return len(self.amounts)

    def normalized(self) -> tuple[float, ...]:
        """Amounts mapped onto [0, 1] for area computation."""
        a0, a_last = self.amounts[0], self.amounts[-1]
        return tuple((a - a0) / (a_last - a0) for a in self.amounts)


@dataclass(frozen=True)
class RepeatabilityMatrix:
    """n scenes x m steps of repeatability scores; None marks a missing sample."""

    scene_ids: tuple[str, ...]
    axis: StepAxis
    scores: tuple[tuple[float | None, ...], ...]
    detector: str = ""

    def __post_init__(self):
        object.__setattr__(self, "scene_ids", tuple(self.scene_ids))
        rows = tuple(tuple(row) for row in self.scores)
        object.__setattr__(self, "scores", rows)
        if len(rows) != len(self.scene_ids) or not rows:
            raise ValidationError("need one score row per scene")
        for row in rows:
            if len(row) != self.axis.m:
                raise ValidationError("every row must have one score per step")
            for s in row:
                if s is not None and not 0.0 <= s <= 1.0:
                    raise ValidationError(f"score {s} outside [0, 1]")
        for k in range(self.axis.m):
            if all(row[k] is None for row in rows):
                raise DegenerateColumnError(
                    f"all scores missing at step amount {self.axis.amounts[k]}"
                )

    def column(self, k: int) -> list[float]:
        """Present scores at step k (the paper's per-step sample set)."""
        return [row[k] for row in self.scores if row[k] is not None]


@dataclass(frozen=True)
class BoundsCurves:
    """Max/min/median curves plus the derived region areas."""

    axis: StepAxis
    max_curve: tuple[float, ...]
    min_curve: tuple[float, ...]
    median_curve: tuple[float, ...]
    operating_area: float
    guarantee_area: float

    def __post_init__(self):
        for name in ("max_curve", "min_curve", "median_curve"):
            curve = tuple(float(v) for v in getattr(self, name))
            if len(curve) != self.axis.m:
                raise ValidationError(f"{name} must have one value per step")
            if any(not 0.0 <= v <= 1.0 for v in curve):
                raise ValidationError(f"{name} values must lie in [0, 1]")
            object.__setattr__(self, name, curve)
        for lo, mid, hi in zip(self.min_curve, self.median_curve, self.max_curve):
            if not lo <= mid <= hi:
                raise ValidationError("pointwise ordering min <= median <= max violated")
        for name in ("operating_area", "guarantee_area"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValidationError(f"{name} {v} outside [0, 1]")
        max_area = _trapezoid(self.max_curve, self.axis.normalized())
        if abs(self.operating_area + self.guarantee_area - max_area) > AREA_TOLERANCE:
            raise ValidationError("areas must sum to the area under the max curve")


def _median(values: list[float]) -> float:
    ordered = sorted(values)
    n = len(ordered)
    if n % 2:
        return ordered[n // 2]
    return 0.5 * (ordered[n // 2 - 1] + ordered[n // 2])


def _trapezoid(values, xs) -> float:
    total = 0.0
    for i in range(len(xs) - 1):
        total += 0.5 * (values[i] + values[i + 1]) * (xs[i + 1] - xs[i])
    return total


def evaluate_scene(dataset: Dataset, detector: DetectorSpec, tol: float) -> list[float | None]:
    """One matrix row: repeatability of every step against the step-0 reference."""
    ref_img = load_image(dataset.image_paths[0])
    if detector.is_external:
        ref_kps = ingest_keypoints(
            external_keypoint_path(detector.keypoint_dir, dataset.scene_id, 0),
            dims=ref_img.dims,
        )
    else:
        ref_kps = detect(ref_img, detector)

    row: list[float | None] = []
    for k in range(len(dataset.steps)):
        if k == 0:
            tgt_img, tgt_kps = ref_img, ref_kps
        else:
            tgt_img = load_image(dataset.image_paths[k])
            if detector.is_external:
                tgt_kps = ingest_keypoints(
                    external_keypoint_path(detector.keypoint_dir, dataset.scene_id, k),
                    dims=tgt_img.dims,
                )
            else:
                tgt_kps = detect(tgt_img, detector)
        try:
            result = repeatability(
                ref_kps, tgt_kps, dataset.homography, tol, ref_img.dims, tgt_img.dims
            )
            row.append(result.score)
        except UndefinedScoreError:
            row.append(None)
    return row


def _scene_row(dataset: Dataset, detector: DetectorSpec, tol: float):
    return dataset.scene_id, evaluate_scene(dataset, detector, tol)


def collect_matrix(
    datasets: list[Dataset], detector: DetectorSpec, tol: float, jobs: int = 1
) -> RepeatabilityMatrix:
    """Evaluate every scene of a sweep into the n x m repeatability matrix.

    All datasets must share one transformation kind and step schedule.
    `jobs` > 1 evaluates scenes in a process pool; the result is identical
    to sequential evaluation (rows are reduced in dataset order).
    """
    if not datasets:
        raise ConfigError("no datasets to evaluate")
    kind = datasets[0].kind
    steps = datasets[0].steps
    for ds in datasets[1:]:
        if ds.kind != kind or ds.steps != steps:
            raise ConfigError(
                f"dataset {ds.scene_id!r} does not match the sweep (kind/schedule differ)"
            )

    worker = partial(_scene_row, detector=detector, tol=tol)
    if jobs == 1:
        results = [worker(ds) for ds in datasets]
    else:
        max_workers = jobs if jobs > 0 else os.cpu_count() or 1
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            results = list(pool.map(worker, datasets))

    return RepeatabilityMatrix(
        scene_ids=tuple(sid for sid, _ in results),
        axis=StepAxis(steps),
        scores=tuple(tuple(row) for _, row in results),
        detector=detector.name,
    )


def region_areas(max_curve, min_curve, axis: StepAxis) -> tuple[float, float]:
    """(operating_area, guarantee_area) by the trapezoid rule over the
    amount axis normalized to [0, 1]."""
    max_curve = tuple(float(v) for v in max_curve)
    min_curve = tuple(float(v) for v in min_curve)
    if len(max_curve) != axis.m or len(min_curve) != axis.m:
        raise ValidationError("curves must have one value per step")
    if any(lo > hi for lo, hi in zip(min_curve, max_curve)):
        raise ValidationError("min curve exceeds max curve")
    xs = axis.normalized()
    guarantee = _trapezoid(min_curve, xs)
    operating = _trapezoid([hi - lo for hi, lo in zip(max_curve, min_curve)], xs)
    return operating, guarantee


def aggregate_curves(matrix: RepeatabilityMatrix) -> BoundsCurves:
    """Per-step max/min/median over present scores, plus the region areas."""
    max_curve, min_curve, median_curve = [], [], []
    for k in range(matrix.axis.m):
        column = matrix.column(k)
        max_curve.append(max(column))
        min_curve.append(min(column))
        median_curve.append(_median(column))
    operating, guarantee = region_areas(max_curve, min_curve, matrix.axis)
    return BoundsCurves(
        axis=matrix.axis,
        max_curve=tuple(max_curve),
        min_curve=tuple(min_curve),
        median_curve=tuple(median_curve),
        operating_area=operating,
        guarantee_area=guarantee,
    )


def stability_summary(curves: BoundsCurves) -> dict:
    """Raw stability quantities; no pass/fail thresholds are applied."""
    band = [hi - lo for hi, lo in zip(curves.max_curve, curves.min_curve)]
    first_zero = None
    for amount, lo in zip(curves.axis.amounts, curves.min_curve):
        if lo == 0.0:
            first_zero = amount
            break
    return {
        "operating_area": curves.operating_area,
        "guarantee_area": curves.guarantee_area,
        "max_band_width": max(band),
        "first_step_where_min_reaches_zero": first_zero,
    }


def write_matrix_csv(matrix: RepeatabilityMatrix, path) -> None:
    """One row per (scene, step); missing scores are left empty."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(MATRIX_CSV_HEADER)
        for scene_id, row in zip(matrix.scene_ids, matrix.scores):
            for amount, score in zip(matrix.axis.amounts, row):
                writer.writerow([scene_id, repr(amount), "" if score is None else repr(score)])


def read_matrix_csv(path) -> RepeatabilityMatrix:
    """Parse a matrix CSV back; scene and step order follow the file."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"empty matrix CSV {path}", line=1) from None
        if tuple(header) != MATRIX_CSV_HEADER:
            raise ParseError(
                f"expected header {','.join(MATRIX_CSV_HEADER)!r} in {path}", line=1
            )
        scene_order: list[str] = []
        per_scene: dict[str, list[tuple[float, float | None]]] = {}
        for lineno, fields in enumerate(reader, start=2):
            if not fields:
                continue
            if len(fields) != 3:
                raise ParseError(f"expected 3 fields, got {len(fields)} in {path}", line=lineno)
            scene_id, amount_s, score_s = fields
            try:
                amount = float(amount_s)
                score = None if score_s == "" else float(score_s)
            except ValueError as exc:
                raise ParseError(f"bad number in {path}: {exc}", line=lineno) from None
            if scene_id not in per_scene:
                scene_order.append(scene_id)
                per_scene[scene_id] = []
            per_scene[scene_id].append((amount, score))

    if not scene_order:
        raise ParseError(f"no data rows in matrix CSV {path}", line=2)
    amounts = tuple(a for a, _ in per_scene[scene_order[0]])
    rows = []
    for scene_id in scene_order:
        entries = per_scene[scene_id]
        if tuple(a for a, _ in entries) != amounts:
            raise ParseError(f"scene {scene_id!r} has a mismatched step schedule in {path}")
        rows.append(tuple(s for _, s in entries))
    try:
        axis = StepAxis(amounts)
    except ValidationError as exc:
        raise ParseError(f"invalid step axis in {path}: {exc}") from None
    return RepeatabilityMatrix(
        scene_ids=tuple(scene_order), axis=axis, scores=tuple(rows), detector=""
    )
