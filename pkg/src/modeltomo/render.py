"""Minimal SVG output.  Coordinates are floats here and nowhere else."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence
from xml.sax.saxutils import escape

from .cyclotomic import CycNum
from .modelset import Window

__all__ = ["RenderSpec", "PALETTE", "svg_document"]

PALETTE = (
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#9467bd",
    "#ff7f0e",
    "#17becf",
    "#8c564b",
    "#e377c2",
)


@dataclass
class RenderSpec:
    kind: str
    scale: float = 40.0
    radius: float = 3.0
    margin: float = 20.0
    palette: Sequence[str] = field(default=PALETTE)

    def __post_init__(self) -> None:
        if self.scale <= 0:
            raise ValueError("scale must be positive")


def _xy(p: complex) -> tuple[float, float]:
    return p.real, -p.imag


def svg_document(
    spec: RenderSpec,
    point_groups: Sequence[Iterable[complex]] = (),
    polygons: Sequence[Sequence[complex]] = (),
    title: str | None = None,
) -> str:
    """Points drawn as circles (one colour per group) and closed polygons as outlines."""
    groups = [[_xy(p) for p in g] for g in point_groups]
    polys = [[_xy(p) for p in poly] for poly in polygons]
    allpts = [p for g in groups for p in g] + [p for poly in polys for p in poly]
    if allpts:
        xs = [p[0] for p in allpts]
        ys = [p[1] for p in allpts]
        x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    else:
        x0 = x1 = y0 = y1 = 0.0
    s, m = spec.scale, spec.margin
    width = (x1 - x0) * s + 2 * m
    height = (y1 - y0) * s + 2 * m

    def tx(p: tuple[float, float]) -> tuple[float, float]:
        return (p[0] - x0) * s + m, (p[1] - y0) * s + m

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.2f}" height="{height:.2f}" '
        f'viewBox="0 0 {width:.2f} {height:.2f}">',
    ]
    if title:
        out.append(f"<title>{escape(title)}</title>")
    for poly in polys:
        pts = " ".join(f"{x:.3f},{y:.3f}" for x, y in map(tx, poly))
        out.append(f'<polygon points="{pts}" fill="none" stroke="#444" stroke-width="1"/>')
    for gi, g in enumerate(groups):
        color = spec.palette[gi % len(spec.palette)]
        out.append(f'<g fill="{color}">')
        for x, y in map(tx, g):
            out.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="{spec.radius:.2f}"/>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def complex_points(points: Iterable[CycNum]) -> list[complex]:
    return [complex(p) for p in points]


def window_outline(w: Window, shift: complex = 0j) -> list[complex]:
    return [v + shift for v in w.outline]
