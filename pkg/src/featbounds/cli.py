"""Command-line pipeline: dataset generation, evaluation, bounds, plots.

Exit codes: 0 success, 2 configuration/parse error, 3 I/O error,
4 degenerate data. All commands are deterministic for identical inputs;
--jobs changes wall time only.
"""

from __future__ import annotations

import argparse
import shutil
import sys
from pathlib import Path

from . import bounds as bounds_mod
from . import imaging, report
from .detectors import DETECTOR_NAMES, DetectorSpec, EXTERNAL
from .errors import (
    CodecError,
    ConfigError,
    DegenerateColumnError,
    FeatboundsError,
    UndefinedScoreError,
)
from .repeatability import DEFAULT_TOLERANCE

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_DEGENERATE = 4

SCENE_SUFFIXES = (".png", ".pgm", ".jpg", ".jpeg")

_CONFIG_KEYS = {
    "scenes": str,
    "out": str,
    "transform": str,
    "steps": str,
    "detector": str,
    "keypoints": str,
    "tol": float,
    "jobs": int,
    "matrix": str,
}


def _read_config(path) -> dict:
    """Flat key = value text; '#' starts a comment; flags override these."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path} line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip().strip("\"'")
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"{path} line {lineno}: unknown key {key!r}")
        try:
            values[key] = _CONFIG_KEYS[key](value)
        except ValueError:
            raise ConfigError(f"{path} line {lineno}: bad value for {key!r}") from None
    return values


def _require(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            raise ConfigError(f"--{name} is required (flag or config file)")


def _parse_steps(kind: str, text: str):
    if text == "default":
        return imaging.default_schedule(kind)
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError:
        raise ConfigError(f"--steps must be 'default' or a comma-separated list, got {text!r}") from None
    return imaging.validate_schedule(kind, values)


def _detector_spec(args) -> DetectorSpec:
    if args.detector == EXTERNAL:
        if args.keypoints is None:
            raise ConfigError("--keypoints is required with --detector ext")
        return DetectorSpec(name=EXTERNAL, keypoint_dir=Path(args.keypoints))
    return DetectorSpec(name=args.detector)


def _list_scenes(scenes_dir: Path):
    if not scenes_dir.is_dir():
        raise ConfigError(f"no scenes found: {scenes_dir} is not a directory")
    files = sorted(
        p for p in scenes_dir.iterdir() if p.suffix.lower() in SCENE_SUFFIXES and p.is_file()
    )
    if not files:
        raise ConfigError(f"no scenes found in {scenes_dir}")
    return files


def cmd_gen(args) -> int:
    _require(args, "scenes", "out", "transform")
    scene_files = _list_scenes(Path(args.scenes))
    steps = _parse_steps(args.transform, args.steps)
    kind_dir = Path(args.out) / args.transform
    created: list[Path] = []
    try:
        n_images = 0
        for path in scene_files:
            image = imaging.load_image(path)
            scene_dir = kind_dir / path.stem
            created.append(scene_dir)
            dataset = imaging.build_dataset(image, path.stem, args.transform, steps, scene_dir)
            n_images += len(dataset.image_paths)
    except BaseException:
        for scene_dir in created:
            shutil.rmtree(scene_dir, ignore_errors=True)
        raise
    print(f"generated {len(scene_files)} scene(s), {n_images} image(s) under {kind_dir}")
    return EXIT_OK


def _load_sweep(args):
    kind_dir = Path(args.out) / args.transform
    manifests = sorted(kind_dir.glob(f"*/{imaging.MANIFEST_NAME}"), key=lambda p: p.parent.name)
    if not manifests:
        raise ConfigError(f"no datasets found under {kind_dir}; run gen first")
    return [imaging.load_dataset(m) for m in manifests]


def _matrix_path(args) -> Path:
    return Path(args.out) / f"{args.detector}_{args.transform}_matrix.csv"


def cmd_eval(args) -> int:
    _require(args, "out", "transform", "detector")
    datasets = _load_sweep(args)
    spec = _detector_spec(args)
    matrix = bounds_mod.collect_matrix(datasets, spec, tol=args.tol, jobs=args.jobs)
    out_path = _matrix_path(args)
    bounds_mod.write_matrix_csv(matrix, out_path)
    print(f"wrote {out_path} ({len(matrix.scene_ids)} scene(s) x {matrix.axis.m} step(s))")
    return EXIT_OK


def _bounds_outputs(matrix_path: Path, out_dir: Path):
    base = matrix_path.stem
    if base.endswith("_matrix"):
        base = base[: -len("_matrix")]
    return out_dir / f"{base}_curves.csv", out_dir / f"{base}_bounds.svg", base


def cmd_bounds(args) -> int:
    _require(args, "matrix", "out")
    matrix_path = Path(args.matrix)
    matrix = bounds_mod.read_matrix_csv(matrix_path)
    curves = bounds_mod.aggregate_curves(matrix)
    summary = bounds_mod.stability_summary(curves)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    curves_path, svg_path, base = _bounds_outputs(matrix_path, out_dir)
    report.write_curves_csv(curves, curves_path)
    svg_path.write_text(
        report.render_bounds_plot(curves, report.PlotStyle(), title=base),
        encoding="utf-8",
        newline="\n",
    )
    print(f"wrote {curves_path}")
    print(f"wrote {svg_path}")
    print(f"operating_area={summary['operating_area']!r}")
    print(f"guarantee_area={summary['guarantee_area']!r}")
    print(f"max_band_width={summary['max_band_width']!r}")
    return EXIT_OK


def cmd_all(args) -> int:
    rc = cmd_gen(args)
    if rc != EXIT_OK:
        return rc
    rc = cmd_eval(args)
    if rc != EXIT_OK:
        return rc
    args.matrix = str(_matrix_path(args))
    return cmd_bounds(args)


_SETTING_DEFAULTS = {"steps": "default", "tol": DEFAULT_TOLERANCE, "jobs": 1}


def _add_common(parser: argparse.ArgumentParser, *, scenes=False, sweep=False, matrix=False):
    parser.add_argument("--config", help="key = value config file; flags win")
    parser.add_argument("--out", help="output directory")
    if scenes:
        parser.add_argument("--scenes", help="directory of scene images (PGM/PNG/JPEG)")
        parser.add_argument("--steps", help="'default' or comma-separated percentages")
    if scenes or sweep:
        parser.add_argument("--transform", choices=list(imaging.KINDS), help="degradation kind")
    if sweep:
        parser.add_argument("--detector", choices=list(DETECTOR_NAMES), help="detector to evaluate")
        parser.add_argument("--keypoints", help="external keypoint directory (detector=ext)")
        parser.add_argument("--tol", type=float, help="match tolerance in px")
        parser.add_argument("--jobs", type=int, help="worker processes (0 = auto)")
    if matrix:
        parser.add_argument("--matrix", help="matrix CSV produced by eval")


def _merge_config(args, config: dict) -> None:
    """Fill unset settings from the config file, then built-in defaults."""
    for key in _CONFIG_KEYS:
        if not hasattr(args, key):
            continue
        if getattr(args, key) is None:
            if key in config:
                setattr(args, key, config[key])
            elif key in _SETTING_DEFAULTS:
                setattr(args, key, _SETTING_DEFAULTS[key])
    if getattr(args, "transform", None) is not None and args.transform not in imaging.KINDS:
        raise ConfigError(f"transform must be one of {'/'.join(imaging.KINDS)}")
    if getattr(args, "detector", None) is not None and args.detector not in DETECTOR_NAMES:
        raise ConfigError(f"detector must be one of {'/'.join(DETECTOR_NAMES)}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="featbounds",
        description="Characterize detector performance bounds under parameterized degradations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    _add_common(sub.add_parser("gen", help="generate sweep datasets"), scenes=True)
    _add_common(sub.add_parser("eval", help="evaluate a detector into a matrix CSV"), sweep=True)
    _add_common(sub.add_parser("bounds", help="aggregate a matrix into curves and a plot"), matrix=True)
    _add_common(sub.add_parser("all", help="gen + eval + bounds"), scenes=True, sweep=True)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)

    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)

    parser = build_parser()
    try:
        config = _read_config(known.config) if known.config else {}
        args = parser.parse_args(argv)
        _merge_config(args, config)
        handler = {"gen": cmd_gen, "eval": cmd_eval, "bounds": cmd_bounds, "all": cmd_all}[
            args.command
        ]
        return handler(args)
    except (DegenerateColumnError, UndefinedScoreError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (OSError, CodecError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except FeatboundsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
