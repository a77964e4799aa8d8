"""Image I/O, the two parameterized degradations, and sweep-dataset generation.

Images are single-channel 8-bit rasters. The two degradations are JPEG
re-encoding at a compression-ratio percentage and a uniform multiplicative
brightness decrease. `build_dataset` materializes one transformation sweep
per scene together with a JSON manifest that records the exact schedule,
ground-truth homography, and codec.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import PIL
from PIL import Image as PILImage
from PIL import UnidentifiedImageError

from .errors import CodecError, FormatError, ParameterError, ParseError
from .repeatability import Homography

KIND_JPEG = "jpeg"
KIND_LIGHT = "light"
KINDS = (KIND_JPEG, KIND_LIGHT)

#: Inclusive amount ranges per transformation kind, in percent.
AMOUNT_RANGE = {KIND_JPEG: (0.0, 98.0), KIND_LIGHT: (0.0, 90.0)}

#: Number of discrete steps in the default sweep schedules.
DEFAULT_STEP_COUNT = 14

#: Identifier of the pinned JPEG codec, recorded in every manifest.
CODEC_ID = f"pillow-{PIL.__version__}"

#: ITU-R BT.601 luma weights for RGB-to-gray conversion.
LUMA_WEIGHTS = (0.299, 0.587, 0.114)

MANIFEST_NAME = "manifest.json"
_MANIFEST_KEYS = ("scene_id", "kind", "steps", "images", "homography", "codec")
_LOADABLE_FORMATS = {"PNG", "JPEG", "PPM"}


@dataclass(frozen=True, eq=False)
class Image:
    """Grayscale raster: a (height, width) uint8 array, row-major."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 2 or px.size == 0:
            raise ParameterError("pixels must be a non-empty 2-D array")
        if px.dtype != np.uint8:
            raise ParameterError(f"pixels must be uint8, got {px.dtype}")
        object.__setattr__(self, "pixels", np.ascontiguousarray(px))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def dims(self) -> tuple[int, int]:
        """(width, height) pair as consumed by the repeatability stage."""
        return self.width, self.height

    def same_pixels(self, other: "Image") -> bool:
        return self.pixels.shape == other.pixels.shape and np.array_equal(
            self.pixels, other.pixels
        )


def _round_half_up(values: np.ndarray) -> np.ndarray:
    return np.floor(values + 0.5)


def _to_gray(pil_img: PILImage.Image) -> np.ndarray:
    if pil_img.mode == "L":
        return np.asarray(pil_img, dtype=np.uint8)
    if pil_img.mode in ("1", "P", "LA", "RGB", "RGBA"):
        rgb = np.asarray(pil_img.convert("RGB"), dtype=np.float64)
        luma = rgb[..., 0] * LUMA_WEIGHTS[0] + rgb[..., 1] * LUMA_WEIGHTS[1] + rgb[..., 2] * LUMA_WEIGHTS[2]
        return np.clip(_round_half_up(luma), 0, 255).astype(np.uint8)
    raise FormatError(f"unsupported image mode {pil_img.mode!r}")


def load_image(path) -> Image:
    """Load a PGM (P5), PNG, or JPEG file as a grayscale Image.

    Color inputs are reduced with the BT.601 luma weights, rounded half-up.
    """
    path = Path(path)
    try:
        with PILImage.open(path) as pil_img:
            if pil_img.format not in _LOADABLE_FORMATS:
                raise FormatError(f"unsupported image format {pil_img.format!r}: {path}")
            return Image(_to_gray(pil_img))
    except UnidentifiedImageError as exc:
        raise FormatError(f"not a readable image file: {path}") from exc


def save_image(img: Image, path) -> None:
    """Write an Image losslessly; the suffix picks PNG (.png) or PGM (.pgm)."""
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix == ".png":
        fmt = "PNG"
    elif suffix == ".pgm":
        fmt = "PPM"
    else:
        raise ParameterError(f"lossless save supports .png/.pgm, got {path.suffix!r}")
    PILImage.fromarray(img.pixels, mode="L").save(path, format=fmt)


def apply_brightness(img: Image, decrease_pct: float) -> Image:
    """Uniform brightness decrease: scale by (1 - pct/100), round half-up."""
    lo, hi = AMOUNT_RANGE[KIND_LIGHT]
    if not lo <= decrease_pct <= hi:
        raise ParameterError(f"brightness decrease must be in [{lo}, {hi}], got {decrease_pct}")
    if decrease_pct == 0:
        return Image(img.pixels.copy())
    scaled = img.pixels.astype(np.float64) * (100.0 - decrease_pct) / 100.0
    return Image(np.clip(_round_half_up(scaled), 0, 255).astype(np.uint8))


def jpeg_quality(ratio_pct: float) -> int:
    """Encoder quality for a compression-ratio percentage: clamp(100 - ratio, 1, 100)."""
    lo, hi = AMOUNT_RANGE[KIND_JPEG]
    if not lo <= ratio_pct <= hi:
        raise ParameterError(f"jpeg ratio must be in [{lo}, {hi}], got {ratio_pct}")
    return int(_round_half_up(np.float64(min(max(100.0 - ratio_pct, 1.0), 100.0))))


def encode_jpeg(img: Image, ratio_pct: float) -> bytes:
    """Encode with the pinned codec at the quality mapped from `ratio_pct`."""
    quality = jpeg_quality(ratio_pct)
    buf = io.BytesIO()
    try:
        PILImage.fromarray(img.pixels, mode="L").save(buf, format="JPEG", quality=quality)
    except OSError as exc:
        raise CodecError(f"jpeg encode failed at quality {quality}: {exc}") from exc
    return buf.getvalue()


def decode_jpeg(data: bytes) -> Image:
    try:
        with PILImage.open(io.BytesIO(data)) as pil_img:
            return Image(_to_gray(pil_img))
    except (UnidentifiedImageError, OSError) as exc:
        raise CodecError(f"jpeg decode failed: {exc}") from exc


def apply_jpeg(img: Image, ratio_pct: float) -> Image:
    """Round-trip the image through the JPEG codec at the mapped quality."""
    out = decode_jpeg(encode_jpeg(img, ratio_pct))
    if out.dims != img.dims:
        raise CodecError("codec changed image dimensions")
    return out


@dataclass(frozen=True)
class TransformSpec:
    """One degradation: kind ("jpeg" | "light") and amount percentage."""

    kind: str
    amount_pct: float

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"unknown transform kind {self.kind!r}")
        lo, hi = AMOUNT_RANGE[self.kind]
        if not lo <= self.amount_pct <= hi:
            raise ParameterError(
                f"{self.kind} amount must be in [{lo}, {hi}], got {self.amount_pct}"
            )


def apply_transform(img: Image, spec: TransformSpec) -> Image:
    if spec.amount_pct == 0:
        return Image(img.pixels.copy())
    if spec.kind == KIND_JPEG:
        return apply_jpeg(img, spec.amount_pct)
    return apply_brightness(img, spec.amount_pct)


def default_schedule(kind: str) -> tuple[float, ...]:
    """The 14-step sweep: linear from 0 to the kind's maximum, rounded to
    integer percent, duplicates bumped up to keep the list strictly increasing."""
    if kind not in KINDS:
        raise ParameterError(f"unknown transform kind {kind!r}")
    hi = AMOUNT_RANGE[kind][1]
    amounts: list[float] = []
    for i in range(DEFAULT_STEP_COUNT):
        value = float(math.floor(i * hi / (DEFAULT_STEP_COUNT - 1) + 0.5))
        while amounts and value <= amounts[-1]:
            value += 1.0
        amounts.append(value)
    return tuple(amounts)


def validate_schedule(kind: str, steps) -> tuple[float, ...]:
    steps = tuple(float(s) for s in steps)
    if len(steps) < 2:
        raise ParameterError("schedule needs at least two steps")
    if steps[0] != 0.0:
        raise ParameterError("schedule must start at 0")
    if any(b <= a for a, b in zip(steps, steps[1:])):
        raise ParameterError("schedule must be strictly increasing")
    lo, hi = AMOUNT_RANGE[kind]
    if steps[-1] > hi or steps[0] < lo:
        raise ParameterError(f"schedule exceeds the {kind} range [{lo}, {hi}]")
    return steps


@dataclass(frozen=True)
class Dataset:
    """One scene's transformation sweep on disk."""

    scene_id: str
    kind: str
    steps: tuple[float, ...]
    image_paths: tuple[Path, ...]
    homography: Homography

    def __post_init__(self):
        if len(self.image_paths) != len(self.steps):
            raise ParameterError("one image path per step required")


def _step_filename(kind: str, index: int, amount: float) -> str:
    # Step files are 1-based, matching the external keypoint naming scheme.
    ext = "jpg" if kind == KIND_JPEG and amount > 0 else "png"
    return f"step{index + 1:02d}.{ext}"


def build_dataset(scene_image: Image, scene_id: str, kind: str, step_schedule, out_dir) -> Dataset:
    """Write the sweep images plus manifest for one scene; returns the Dataset.

    Step 0 is stored losslessly and decodes byte-identical to `scene_image`.
    JPEG-kind targets are stored as the encoded JPEG bytes themselves;
    brightness-kind targets are stored losslessly.
    """
    steps = validate_schedule(kind, step_schedule)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    names = [_step_filename(kind, i, a) for i, a in enumerate(steps)]
    for i, (amount, name) in enumerate(zip(steps, names)):
        path = out_dir / name
        if i == 0 or kind == KIND_LIGHT:
            save_image(apply_transform(scene_image, TransformSpec(kind, amount)), path)
        else:
            path.write_bytes(encode_jpeg(scene_image, amount))

    manifest = {
        "scene_id": scene_id,
        "kind": kind,
        "steps": list(steps),
        "images": names,
        "homography": list(Homography.identity().h),
        "codec": CODEC_ID,
    }
    (out_dir / MANIFEST_NAME).write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")

    return Dataset(
        scene_id=scene_id,
        kind=kind,
        steps=steps,
        image_paths=tuple(out_dir / n for n in names),
        homography=Homography.identity(),
    )


def load_dataset(manifest_path) -> Dataset:
    """Read a manifest back into a Dataset, resolving image paths."""
    manifest_path = Path(manifest_path)
    try:
        raw = json.loads(manifest_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid manifest JSON in {manifest_path}: {exc.msg}", line=exc.lineno) from None
    missing = [k for k in _MANIFEST_KEYS if k not in raw]
    if missing:
        raise ParseError(f"manifest {manifest_path} lacks keys: {', '.join(missing)}")
    if raw["kind"] not in KINDS:
        raise ParseError(f"manifest {manifest_path} has unknown kind {raw['kind']!r}")
    steps = validate_schedule(raw["kind"], raw["steps"])
    base = manifest_path.parent
    return Dataset(
        scene_id=str(raw["scene_id"]),
        kind=raw["kind"],
        steps=steps,
        image_paths=tuple(base / p for p in raw["images"]),
        homography=Homography(tuple(raw["homography"])),
    )
