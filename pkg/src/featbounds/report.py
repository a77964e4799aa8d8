"""Bounds-plot rendering (SVG) and the curves CSV artifact.

The plot shows the three curves with the operating region shaded between
max and min and the guarantee region shaded under min, on a fixed [0, 1]
repeatability axis so plots are comparable across detectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from xml.sax.saxutils import escape

from .bounds import BoundsCurves, StepAxis
from .errors import ParameterError, ParseError

CURVES_CSV_HEADER = ("step_amount", "min", "median", "max")


@dataclass(frozen=True)
class PlotStyle:
    width: int = 640
    height: int = 420
    max_color: str = "#2e7d32"
    median_color: str = "#1565c0"
    min_color: str = "#c62828"
    operating_fill: str = "#fff3cd"
    guarantee_fill: str = "#d3e9d7"
    x_label: str = "transformation amount (%)"
    y_label: str = "repeatability"

    def __post_init__(self):
        if self.width < 100 or self.height < 100:
            raise ParameterError("plot must be at least 100x100 pixels")


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def render_bounds_plot(curves: BoundsCurves, style: PlotStyle = PlotStyle(), title: str = "") -> str:
    """Deterministic SVG text with three polylines and the two region polygons."""
    left, right, top, bottom = 52.0, 16.0, 30.0, 46.0
    pw = style.width - left - right
    ph = style.height - top - bottom
    a0, a1 = curves.axis.amounts[0], curves.axis.amounts[-1]

    def sx(a: float) -> float:
        return left + (a - a0) / (a1 - a0) * pw

    def sy(v: float) -> float:
        return top + (1.0 - v) * ph

    def pts(values) -> str:
        return " ".join(
            f"{_fmt(sx(a))},{_fmt(sy(v))}" for a, v in zip(curves.axis.amounts, values)
        )

    guarantee_pts = (
        pts(curves.min_curve)
        + f" {_fmt(sx(a1))},{_fmt(sy(0.0))} {_fmt(sx(a0))},{_fmt(sy(0.0))}"
    )
    operating_pts = pts(curves.max_curve) + " " + " ".join(
        f"{_fmt(sx(a))},{_fmt(sy(v))}"
        for a, v in zip(reversed(curves.axis.amounts), reversed(curves.min_curve))
    )

    out = []
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{style.width}" '
        f'height="{style.height}" viewBox="0 0 {style.width} {style.height}">'
    )
    out.append(f'<rect width="{style.width}" height="{style.height}" fill="#ffffff"/>')
    if title:
        out.append(
            f'<text x="{_fmt(style.width / 2)}" y="18" text-anchor="middle" '
            f'font-family="sans-serif" font-size="13">{escape(title)}</text>'
        )

    out.append(f'<polygon points="{guarantee_pts}" fill="{style.guarantee_fill}" stroke="none"/>')
    out.append(f'<polygon points="{operating_pts}" fill="{style.operating_fill}" stroke="none"/>')

    # axes and ticks
    axis_attr = 'stroke="#444444" stroke-width="1"'
    out.append(f'<line x1="{_fmt(left)}" y1="{_fmt(sy(0))}" x2="{_fmt(left + pw)}" y2="{_fmt(sy(0))}" {axis_attr}/>')
    out.append(f'<line x1="{_fmt(left)}" y1="{_fmt(sy(0))}" x2="{_fmt(left)}" y2="{_fmt(sy(1))}" {axis_attr}/>')
    for i in range(5):
        v = i / 4.0
        y = sy(v)
        out.append(f'<line x1="{_fmt(left - 4)}" y1="{_fmt(y)}" x2="{_fmt(left)}" y2="{_fmt(y)}" {axis_attr}/>')
        out.append(
            f'<text x="{_fmt(left - 7)}" y="{_fmt(y + 3.5)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="10">{v:g}</text>'
        )
        a = a0 + (a1 - a0) * v
        x = sx(a)
        out.append(f'<line x1="{_fmt(x)}" y1="{_fmt(sy(0))}" x2="{_fmt(x)}" y2="{_fmt(sy(0) + 4)}" {axis_attr}/>')
        out.append(
            f'<text x="{_fmt(x)}" y="{_fmt(sy(0) + 15)}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="10">{a:g}</text>'
        )
    out.append(
        f'<text x="{_fmt(left + pw / 2)}" y="{_fmt(style.height - 10)}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="11">{escape(style.x_label)}</text>'
    )
    out.append(
        f'<text x="14" y="{_fmt(top + ph / 2)}" text-anchor="middle" font-family="sans-serif" '
        f'font-size="11" transform="rotate(-90 14 {_fmt(top + ph / 2)})">{escape(style.y_label)}</text>'
    )

    for values, color in (
        (curves.max_curve, style.max_color),
        (curves.median_curve, style.median_color),
        (curves.min_curve, style.min_color),
    ):
        out.append(
            f'<polyline points="{pts(values)}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )

    # legend: swatches are lines/rects so the polyline/polygon counts stay structural
    entries = (
        ("max", style.max_color, "line"),
        ("median", style.median_color, "line"),
        ("min", style.min_color, "line"),
        ("operating region", style.operating_fill, "rect"),
        ("guarantee region", style.guarantee_fill, "rect"),
    )
    lx, ly = left + 8, top + 8
    for i, (label, color, shape) in enumerate(entries):
        y = ly + i * 14
        if shape == "line":
            out.append(
                f'<line x1="{_fmt(lx)}" y1="{_fmt(y)}" x2="{_fmt(lx + 18)}" y2="{_fmt(y)}" '
                f'stroke="{color}" stroke-width="1.5"/>'
            )
        else:
            out.append(
                f'<rect x="{_fmt(lx)}" y="{_fmt(y - 4)}" width="18" height="8" '
                f'fill="{color}" stroke="#999999" stroke-width="0.5"/>'
            )
        out.append(
            f'<text x="{_fmt(lx + 24)}" y="{_fmt(y + 3.5)}" font-family="sans-serif" '
            f'font-size="10">{escape(label)}</text>'
        )

    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_curves_csv(curves: BoundsCurves, path) -> None:
    """Curves CSV: one row per step plus the trailing areas comment line."""
    lines = [",".join(CURVES_CSV_HEADER)]
    for a, lo, mid, hi in zip(
        curves.axis.amounts, curves.min_curve, curves.median_curve, curves.max_curve
    ):
        lines.append(f"{a!r},{lo!r},{mid!r},{hi!r}")
    lines.append(
        f"# operating_area={curves.operating_area!r} guarantee_area={curves.guarantee_area!r}"
    )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def read_curves_csv(path) -> BoundsCurves:
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != ",".join(CURVES_CSV_HEADER):
        raise ParseError(f"expected header {','.join(CURVES_CSV_HEADER)!r} in {path}", line=1)
    amounts, mins, medians, maxes = [], [], [], []
    operating = guarantee = None
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        if line.startswith("#"):
            parts = dict(
                item.split("=", 1) for item in line.lstrip("# ").split() if "=" in item
            )
            try:
                operating = float(parts["operating_area"])
                guarantee = float(parts["guarantee_area"])
            except (KeyError, ValueError):
                raise ParseError(f"bad areas comment in {path}", line=lineno) from None
            continue
        fields = line.split(",")
        if len(fields) != 4:
            raise ParseError(f"expected 4 fields, got {len(fields)} in {path}", line=lineno)
        try:
            a, lo, mid, hi = (float(v) for v in fields)
        except ValueError as exc:
            raise ParseError(f"bad number in {path}: {exc}", line=lineno) from None
        amounts.append(a)
        mins.append(lo)
        medians.append(mid)
        maxes.append(hi)
    if operating is None or guarantee is None:
        raise ParseError(f"missing areas comment line in {path}")
    return BoundsCurves(
        axis=StepAxis(tuple(amounts)),
        max_curve=tuple(maxes),
        min_curve=tuple(mins),
        median_curve=tuple(medians),
        operating_area=operating,
        guarantee_area=guarantee,
    )
