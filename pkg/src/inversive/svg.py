"""Static SVG output for circle configurations (stroke only)."""

from __future__ import annotations

from xml.sax.saxutils import quoteattr

import numpy as np

from .core import OrientedSphere

HEADER = ('<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
          'width="{size}" height="{size}" viewBox="{x:.9g} {y:.9g} {w:.9g} {h:.9g}">\n')


def _bounds(circles, frame: OrientedSphere | None):
    if frame is not None and not frame.is_plane:
        c, r = frame.center, frame.radius
        return c[0] - r, c[1] - r, c[0] + r, c[1] + r
    finite = [s for s in circles if not s.is_plane]
    if not finite:
        return -1.0, -1.0, 1.0, 1.0
    lo = np.min([s.center - s.radius for s in finite], axis=0)
    hi = np.max([s.center + s.radius for s in finite], axis=0)
    return lo[0], lo[1], hi[0], hi[1]


def render_svg(circles, frame: OrientedSphere | None = None, size: int = 800,
               stroke: str = "black", margin: float = 0.02, groups=None) -> str:
    """Render circles (and lines, clipped to the view) as an SVG document.

    ``frame`` fixes the viewport to a bounding circle; otherwise the view is
    fitted to all finite circles.  ``groups`` optionally labels each circle
    with a class name (e.g. its generation).
    """
    circles = list(circles)
    x0, y0, x1, y1 = _bounds(circles, frame)
    pad = margin * max(x1 - x0, y1 - y0)
    x0, y0, x1, y1 = x0 - pad, y0 - pad, x1 + pad, y1 + pad
    w, h = x1 - x0, y1 - y0
    width = max(w, h) / size
    # y is flipped so the picture has the usual orientation.
    parts = [HEADER.format(size=size, x=x0, y=-y1, w=w, h=h),
             f'<g fill="none" stroke={quoteattr(stroke)} stroke-width="{width:.6g}" '
             'transform="scale(1,-1)">\n']
    diag = float(np.hypot(w, h))
    mid = np.array([(x0 + x1) / 2, (y0 + y1) / 2])
    for i, s in enumerate(circles):
        cls = "" if groups is None else f' class={quoteattr(str(groups[i]))}'
        if s.is_plane:
            n = s.normal
            foot = mid + (s.offset - n @ mid) * n
            t = np.array([-n[1], n[0]])
            a, b = foot - diag * t, foot + diag * t
            parts.append(f'<line{cls} x1="{a[0]:.9g}" y1="{a[1]:.9g}" '
                         f'x2="{b[0]:.9g}" y2="{b[1]:.9g}"/>\n')
        else:
            c = s.center
            parts.append(f'<circle{cls} cx="{c[0]:.9g}" cy="{c[1]:.9g}" r="{s.radius:.9g}"/>\n')
    parts.append("</g>\n</svg>\n")
    return "".join(parts)


def write_svg(path, circles, **kwargs) -> None:
    with open(path, "w") as fh:
        fh.write(render_svg(circles, **kwargs))
