"""Static SVG rendering of a chord layout, for headless inspection."""

from __future__ import annotations

import hashlib
import math

from .layout import ChordLayout

_PALETTE = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948",
    "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac", "#86bcb6", "#d37295",
]


def unit_color(label: str) -> str:
    """Stable categorical color from a hash of the unit label."""
    digest = hashlib.sha256(label.encode("utf-8")).digest()
    return _PALETTE[digest[0] % len(_PALETTE)]


def _pt(cx: float, cy: float, r: float, angle: float) -> tuple[float, float]:
    # Angles grow clockwise on screen (SVG y points down).
    return cx + r * math.cos(angle), cy + r * math.sin(angle)


def _arc_path(cx: float, cy: float, r0: float, r1: float,
              a0: float, a1: float) -> str:
    large = 1 if (a1 - a0) > math.pi else 0
    x0, y0 = _pt(cx, cy, r1, a0)
    x1, y1 = _pt(cx, cy, r1, a1)
    x2, y2 = _pt(cx, cy, r0, a1)
    x3, y3 = _pt(cx, cy, r0, a0)
    return (f"M{x0:.2f},{y0:.2f} A{r1:.2f},{r1:.2f} 0 {large} 1 {x1:.2f},{y1:.2f} "
            f"L{x2:.2f},{y2:.2f} A{r0:.2f},{r0:.2f} 0 {large} 0 {x3:.2f},{y3:.2f} Z")


def _ribbon_path(cx: float, cy: float, r: float, s0: float, s1: float,
                 d0: float, d1: float) -> str:
    xs0, ys0 = _pt(cx, cy, r, s0)
    xs1, ys1 = _pt(cx, cy, r, s1)
    xd0, yd0 = _pt(cx, cy, r, d0)
    xd1, yd1 = _pt(cx, cy, r, d1)
    large_s = 1 if (s1 - s0) > math.pi else 0
    large_d = 1 if (d1 - d0) > math.pi else 0
    return (f"M{xs0:.2f},{ys0:.2f} "
            f"A{r:.2f},{r:.2f} 0 {large_s} 1 {xs1:.2f},{ys1:.2f} "
            f"Q{cx:.2f},{cy:.2f} {xd0:.2f},{yd0:.2f} "
            f"A{r:.2f},{r:.2f} 0 {large_d} 1 {xd1:.2f},{yd1:.2f} "
            f"Q{cx:.2f},{cy:.2f} {xs0:.2f},{ys0:.2f} Z")


def render_chord_svg(chord: ChordLayout, size: int = 640) -> str:
    cx = cy = size / 2
    r_inner = size * 0.32
    r_arc = size * 0.36
    ring_width = size * 0.025

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
    ]
    for rib in chord.ribbons:
        color = unit_color(rib.src)
        parts.append(
            f'<path d="{_ribbon_path(cx, cy, r_inner, rib.src_start, rib.src_end, rib.dst_start, rib.dst_end)}" '
            f'fill="{color}" fill-opacity="0.55" stroke="none">'
            f'<title>{rib.src} -&gt; {rib.dst}: {rib.weight}</title></path>')
    for arc in chord.arcs:
        if arc.end <= arc.start:
            continue
        color = unit_color(arc.unit)
        # Self-loop extent drawn thicker than the rest of the arc.
        if arc.self_end > arc.self_start:
            parts.append(
                f'<path d="{_arc_path(cx, cy, r_inner - ring_width, r_arc, arc.self_start, arc.self_end)}" '
                f'fill="{color}"/>')
        parts.append(
            f'<path d="{_arc_path(cx, cy, r_inner, r_arc, arc.start, arc.end)}" '
            f'fill="{color}"><title>{arc.unit}</title></path>')
        if arc.in_end > arc.in_start:
            parts.append(
                f'<path d="{_arc_path(cx, cy, r_inner, r_arc, arc.in_start, arc.in_end)}" '
                f'fill="black" fill-opacity="0.25"/>')
    for i, ring in enumerate(chord.rings):
        r0 = r_arc + ring_width * 0.5 + ring_width * 1.2 * (0 if ring.level.value == "host" else 1)
        parts.append(
            f'<path d="{_arc_path(cx, cy, r0, r0 + ring_width, ring.start, ring.end)}" '
            f'fill="{unit_color(ring.label)}" fill-opacity="0.8">'
            f'<title>{ring.label}</title></path>')
    if chord.degenerate:
        parts.append(f'<text x="{cx:.0f}" y="{cy:.0f}" text-anchor="middle" '
                     f'font-family="sans-serif">no traffic in this frame</text>')
    parts.append("</svg>")
    return "\n".join(parts)
