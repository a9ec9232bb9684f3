"""SVG rendering of circle packings and horoball diagrams."""

from __future__ import annotations

from .geometry import HoroballDiagram
from .packing import CirclePacking

_HEADER = (
    '<?xml version="1.0" encoding="UTF-8"?>\n'
    '<svg xmlns="http://www.w3.org/2000/svg" viewBox="{vb}" '
    'width="640" height="480">\n'
    '<rect x="{x0}" y="{y0}" width="{w}" height="{h}" fill="white"/>\n'
    '<g transform="scale(1,-1)">\n'
)
_FOOTER = "</g>\n</svg>\n"


def _bounds(packing: CirclePacking):
    xs, ys = [0.0], [0.0]
    for c in packing.whites + packing.shaded:
        if c.is_line:
            continue
        z, r = c.center, c.radius
        xs += [z.real - r, z.real + r]
        ys += [z.imag - r, z.imag + r]
    pad = 0.2 * max(max(xs) - min(xs), max(ys) - min(ys), 1.0)
    return min(xs) - pad, min(ys) - pad, max(xs) + pad, max(ys) + pad


def _line_segment(c, x0, x1, y0, y1):
    n = c.normal()
    off = c.offset()
    if abs(n.imag) >= abs(n.real):
        ya = (off - n.real * x0) / n.imag
        yb = (off - n.real * x1) / n.imag
        return (x0, ya, x1, yb)
    xa = (off - n.imag * y0) / n.real
    xb = (off - n.imag * y1) / n.real
    return (xa, y0, xb, y1)


def packing_svg(packing: CirclePacking) -> str:
    """Circles, lines and tangency points of a solved packing."""
    x0, y0, x1, y1 = _bounds(packing)
    out = [
        _HEADER.format(
            vb=f"{x0:.3f} {-y1:.3f} {x1 - x0:.3f} {y1 - y0:.3f}",
            x0=x0,
            y0=-y1,
            w=x1 - x0,
            h=y1 - y0,
        )
    ]
    for kind, circles, style in (
        ("white", packing.whites, 'stroke="#1f77b4" fill="none" stroke-width="0.02"'),
        ("disk", packing.shaded, 'stroke="#d62728" fill="none" stroke-width="0.012" stroke-dasharray="0.05,0.03"'),
    ):
        for c in circles:
            if c.is_line:
                xa, ya, xb, yb = _line_segment(c, x0, x1, y0, y1)
                out.append(
                    f'<line x1="{xa:.5f}" y1="{ya:.5f}" x2="{xb:.5f}" y2="{yb:.5f}" {style}/>\n'
                )
            else:
                z, r = c.center, c.radius
                out.append(
                    f'<circle cx="{z.real:.5f}" cy="{z.imag:.5f}" r="{r:.5f}" {style}/>\n'
                )
    for _, z in sorted(packing.tangencies.items()):
        if z is None:
            continue
        out.append(
            f'<circle cx="{z.real:.5f}" cy="{z.imag:.5f}" r="0.015" fill="#2ca02c"/>\n'
        )
    out.append(_FOOTER)
    return "".join(out)


def horoball_svg(hd: HoroballDiagram, cusp: str) -> str:
    """Horoballs (as circles sized by diameter) over the face traces."""
    packing = hd.packing
    x0, y0, x1, y1 = _bounds(packing)
    out = [
        _HEADER.format(
            vb=f"{x0:.3f} {-y1:.3f} {x1 - x0:.3f} {y1 - y0:.3f}",
            x0=x0,
            y0=-y1,
            w=x1 - x0,
            h=y1 - y0,
        )
    ]
    for c, prov, _ in hd.hemispheres:
        style = (
            'stroke="#1f77b4" fill="none" stroke-width="0.02"'
            if prov == "plane"
            else 'stroke="#d62728" fill="none" stroke-width="0.012"'
        )
        if c.is_line:
            xa, ya, xb, yb = _line_segment(c, x0, x1, y0, y1)
            out.append(
                f'<line x1="{xa:.5f}" y1="{ya:.5f}" x2="{xb:.5f}" y2="{yb:.5f}" {style}/>\n'
            )
        else:
            z, r = c.center, c.radius
            out.append(
                f'<circle cx="{z.real:.5f}" cy="{z.imag:.5f}" r="{r:.5f}" {style}/>\n'
            )
    for p, diam in hd.horoballs.get(cusp, []):
        out.append(
            f'<circle cx="{p.real:.5f}" cy="{p.imag + diam / 2:.5f}" r="{diam / 2:.5f}" '
            'fill="#9467bd" fill-opacity="0.45"/>\n'
        )
    out.append(_FOOTER)
    return "".join(out)
