"""SVG drawings of regions, cuts, strips and families of images."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple
from xml.sax.saxutils import escape

from .cartography import Presentation
from .cuts import SignChoice, as_signs
from .strips import AdmissibleTriple


@dataclass
class RenderOptions:
    eps: Optional[SignChoice] = None
    triple: Optional[AdmissibleTriple] = None
    title: str = ""
    width: int = 320
    height: int = 320
    margin: int = 24


@dataclass
class Panel:
    pres: Presentation
    options: RenderOptions


def _num(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _star(cx: float, cy: float, r: float = 6.0) -> str:
    pts = []
    for k in range(10):
        rad = r if k % 2 == 0 else r * 0.45
        ang = -math.pi / 2 + k * math.pi / 5
        pts.append(f"{_num(cx + rad * math.cos(ang))},{_num(cy + rad * math.sin(ang))}")
    return " ".join(pts)


class _Frame:
    """Maps plane coordinates into one panel, y pointing up."""

    def __init__(self, bbox, left: float, opts: RenderOptions):
        x0, y0, x1, y1 = (float(v) for v in bbox)
        w = opts.width - 2 * opts.margin
        h = opts.height - 2 * opts.margin - (16 if opts.title else 0)
        self.s = min(w / max(x1 - x0, 1e-9), h / max(y1 - y0, 1e-9))
        self.ox = left + opts.margin + (w - self.s * (x1 - x0)) / 2 - self.s * x0
        top = opts.margin + (16 if opts.title else 0)
        self.oy = top + (h + self.s * (y1 - y0)) / 2 + self.s * y0

    def __call__(self, x, y) -> Tuple[float, float]:
        return self.ox + self.s * float(x), self.oy - self.s * float(y)

    def pts(self, points) -> str:
        return " ".join(f"{_num(a)},{_num(b)}" for a, b in (self(x, y) for x, y in points))


def _panel(pres: Presentation, opts: RenderOptions, index: int, left: float) -> List[str]:
    region = pres.region
    bbox = region.bbox()
    fr = _Frame(bbox, left, opts)
    eps = as_signs(opts.eps) if opts.eps is not None else pres.ref_signs
    out = [f'<g class="panel" id="panel-{index}">']
    if opts.title:
        out.append(f'<text x="{_num(left + opts.width / 2)}" y="{_num(opts.margin)}" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="12">{escape(opts.title)}</text>')
    outline = fr.pts(region.vertices())
    out.append(f'<clipPath id="clip-{index}"><polygon points="{outline}"/></clipPath>')
    out.append(f'<polygon class="region" points="{outline}" fill="#dfe8f3" stroke="#1d3557" stroke-width="1.5"/>')
    if opts.triple is not None:
        y_lo, y_hi = bbox[1], bbox[3]
        for s in opts.triple:
            curve = list(zip(s.gamma.xs, s.gamma.ys))
            far = y_hi if s.sign > 0 else y_lo
            poly = curve + [(s.x_hi, far), (s.x_lo, far)]
            out.append(f'<polygon class="strip" points="{fr.pts(poly)}" fill="#e76f51" fill-opacity="0.3" '
                       f'stroke="none" clip-path="url(#clip-{index})"/>')
    for (x, y), e in zip(pres.focus.points, eps):
        end = region.upper(x) if e > 0 else region.lower(x)
        (ax, ay), (bx, by) = fr(x, y), fr(x, end)
        out.append(f'<line class="cut" x1="{_num(ax)}" y1="{_num(ay)}" x2="{_num(bx)}" y2="{_num(by)}" '
                   f'stroke="#1d3557" stroke-width="1.2" stroke-dasharray="5 3"/>')
    for x, y in pres.focus.points:
        cx, cy = fr(x, y)
        out.append(f'<polygon class="focus" points="{_star(cx, cy)}" fill="#e63946" stroke="#6a040f" '
                   f'stroke-width="0.6"/>')
    out.append("</g>")
    return out


def render_panels(panels: Sequence[Panel]) -> str:
    """Draw panels side by side in one SVG document."""
    width = sum(p.options.width for p in panels) or 1
    height = max((p.options.height for p in panels), default=1)
    lines = ['<?xml version="1.0" encoding="UTF-8"?>',
             f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
             f'viewBox="0 0 {width} {height}">',
             f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>']
    left = 0
    for i, p in enumerate(panels):
        lines += _panel(p.pres, p.options, i, left)
        left += p.options.width
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render_svg(pres: Presentation, options: Optional[RenderOptions] = None) -> str:
    return render_panels([Panel(pres, options or RenderOptions())])


def render_family(pres: Presentation, bound: int = 12, options: Optional[RenderOptions] = None) -> str:
    """One panel per distinct image in the cartographic family."""
    from .cartography import cartographic_family, transition

    base = options or RenderOptions()
    panels = []
    for eps, _ in cartographic_family(pres, bound):
        _, image = transition(pres, eps)
        panels.append(Panel(image, RenderOptions(eps=eps, title=f"eps = {eps}", width=base.width,
                                                 height=base.height, margin=base.margin)))
    return render_panels(panels)
