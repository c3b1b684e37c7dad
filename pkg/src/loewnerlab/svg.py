"""Minimal hand-written SVG: polylines and short segments in a fixed 800x600 view."""
from datetime import datetime, timezone
from xml.sax.saxutils import quoteattr

WIDTH, HEIGHT = 800, 600
MARGIN = 40


class Canvas:
    """Linear map from a world box to the view box, collecting SVG elements.

    The world ``y`` axis points up; the view ``y`` axis points down.
    """

    def __init__(self, xlim, ylim, title=""):
        self.xlim = tuple(float(v) for v in xlim)
        self.ylim = tuple(float(v) for v in ylim)
        self.title = title
        self.items = []
        sx = (WIDTH - 2 * MARGIN) / (self.xlim[1] - self.xlim[0])
        sy = (HEIGHT - 2 * MARGIN) / (self.ylim[1] - self.ylim[0])
        self.transform = {"sx": sx, "sy": -sy,
                          "ox": MARGIN - sx * self.xlim[0], "oy": HEIGHT - MARGIN + sy * self.ylim[0]}

    def to_view(self, x, y):
        t = self.transform
        return t["ox"] + t["sx"] * x, t["oy"] + t["sy"] * y

    def polyline(self, xs, ys, stroke="#555555", width=0.8, cls=None):
        pts = " ".join("%.3f,%.3f" % self.to_view(x, y) for x, y in zip(xs, ys))
        extra = f" class={quoteattr(cls)}" if cls else ""
        self.items.append(f'<polyline{extra} fill="none" stroke="{stroke}" stroke-width="{width}" points="{pts}"/>')

    def segments(self, starts, ends, stroke="#1f4e79", width=0.6):
        lines = []
        for (x0, y0), (x1, y1) in zip(starts, ends):
            a, b = self.to_view(x0, y0)
            c, d = self.to_view(x1, y1)
            lines.append(f'<line x1="{a:.3f}" y1="{b:.3f}" x2="{c:.3f}" y2="{d:.3f}"/>')
        self.items.append(f'<g stroke="{stroke}" stroke-width="{width}">' + "".join(lines) + "</g>")

    def axes(self):
        x0, y0 = self.to_view(self.xlim[0], self.ylim[0])
        x1, y1 = self.to_view(self.xlim[1], self.ylim[1])
        self.items.append(f'<rect x="{x0:.3f}" y="{y1:.3f}" width="{x1 - x0:.3f}" height="{y0 - y1:.3f}" '
                          'fill="none" stroke="#000000" stroke-width="1"/>')

    def render(self, timestamp=True):
        head = ['<?xml version="1.0" encoding="UTF-8"?>']
        if timestamp:
            head.append(f"<!-- generated {datetime.now(timezone.utc).isoformat(timespec='seconds')} -->")
        head.append(f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" '
                    f'width="{WIDTH}" height="{HEIGHT}">')
        if self.title:
            head.append(f"<title>{self.title}</title>")
        return "\n".join(head + self.items + ["</svg>"]) + "\n"
