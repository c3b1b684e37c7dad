"""Driver-bundle and direction-field pictures."""
import numpy as np

from . import scenarios
from .svg import Canvas

HIGHLIGHT = "#c00000"


def driver_bundle(path, highlight=None, max_points=500, title=""):
    """One polyline per driver over time; the ``highlight`` driver drawn in red."""
    stride = max(1, (path.times.size - 1) // max_points)
    idx = np.arange(0, path.times.size, stride)
    if idx[-1] != path.times.size - 1:
        idx = np.append(idx, path.times.size - 1)
    lo, hi = float(path.V.min()), float(path.V.max())
    pad = 0.05 * (hi - lo or 1.0)
    canvas = Canvas((0.0, path.times[-1]), (lo - pad, hi + pad), title)
    canvas.axes()
    for k in range(path.n):
        if k == highlight:
            continue
        canvas.polyline(path.times[idx], path.V[idx, k], cls="driver")
    if highlight is not None:
        canvas.polyline(path.times[idx], path.V[idx, highlight], stroke=HIGHLIGHT, width=1.6, cls="driver heavy")
    return canvas


def direction_field(cfg, grid=None, title=""):
    """Short segments along the trajectory direction at every grid point."""
    grid = scenarios.field_grid() if grid is None else grid
    theta = scenarios.quad_field(cfg, grid)
    x, y = grid.real, grid.imag
    half = 0.4 * min(np.ptp(x[0]) / max(x.shape[1] - 1, 1), np.ptp(y[:, 0]) / max(y.shape[0] - 1, 1))
    dx, dy = half * np.cos(theta), half * np.sin(theta)
    canvas = Canvas((x.min(), x.max()), (0.0, y.max()), title)
    canvas.axes()
    canvas.segments(zip((x - dx).ravel(), (y - dy).ravel()), zip((x + dx).ravel(), (y + dy).ravel()))
    return canvas, theta
