"""Rasterize contour sets into flat-colored RGBA frames.

Fill rule: scanline even-odd, sampling pixel centers (x + 0.5, y + 0.5).
A center is inside when the number of polygon-edge crossings strictly to
its left is odd; edges are half-open in y (y1 <= ys < y2 or the reverse)
so shared vertices are never double-counted.
"""

from __future__ import annotations

import colorsys
import math
from dataclasses import dataclass

import numpy as np

from .contours import Contour, contour_area, signed_area
from .errors import RenderError
from .maskio import Palette

# (h, w, 4) uint8, row-major RGBA.
RasterRGBA = np.ndarray


@dataclass
class RenderPlan:
    layers: list[tuple[int, list[Contour]]]  # back to front
    palette: Palette


_FONT_5X7 = {
    "0": ("01110", "10001", "10011", "10101", "11001", "10001", "01110"),
    "1": ("00100", "01100", "00100", "00100", "00100", "00100", "01110"),
    "2": ("01110", "10001", "00001", "00010", "00100", "01000", "11111"),
    "3": ("11111", "00010", "00100", "00010", "00001", "10001", "01110"),
    "4": ("00010", "00110", "01010", "10010", "11111", "00010", "00010"),
    "5": ("11111", "10000", "11110", "00001", "00001", "10001", "01110"),
    "6": ("00110", "01000", "10000", "11110", "10001", "10001", "01110"),
    "7": ("11111", "00001", "00010", "00100", "01000", "01000", "01000"),
    "8": ("01110", "10001", "10001", "01110", "10001", "10001", "01110"),
    "9": ("01110", "10001", "10001", "01111", "00001", "00010", "01100"),
}


def new_canvas(width: int, height: int) -> RasterRGBA:
    return np.zeros((height, width, 4), dtype=np.uint8)


def _gather_edges(contours):
    """Stack all polygon edges (closing edge included) of usable contours."""
    segs = []
    for c in contours:
        v = np.asarray(c.vertices, dtype=np.float64)
        if len(v) < 3:
            continue  # degenerate, same convention as contour_area == 0
        nxt = np.roll(v, -1, axis=0)
        segs.append(np.column_stack([v[:, 0], v[:, 1], nxt[:, 0], nxt[:, 1]]))
    if not segs:
        return None
    return np.concatenate(segs, axis=0)


def region_mask(contours: list[Contour], width: int, height: int) -> np.ndarray:
    """Even-odd filled-region mask of a contour set, (h, w) bool."""
    mask = np.zeros((height, width), dtype=bool)
    edges = _gather_edges(contours)
    if edges is None:
        return mask
    x1, y1, x2, y2 = edges[:, 0], edges[:, 1], edges[:, 2], edges[:, 3]
    y_lo = max(0, int(math.floor(min(y1.min(), y2.min()))))
    y_hi = min(height, int(math.ceil(max(y1.max(), y2.max()))) + 1)
    for y in range(y_lo, y_hi):
        ys = y + 0.5
        sel = ((y1 <= ys) & (y2 > ys)) | ((y2 <= ys) & (y1 > ys))
        if not sel.any():
            continue
        xs = x1[sel] + (ys - y1[sel]) * (x2[sel] - x1[sel]) / (y2[sel] - y1[sel])
        xs.sort()
        row = mask[y]
        for i in range(0, len(xs) - 1, 2):
            # center px is covered iff xs[i] < px <= xs[i+1]
            lo = max(0, int(math.floor(xs[i] - 0.5)) + 1)
            hi = min(width - 1, int(math.floor(xs[i + 1] - 0.5)))
            if lo <= hi:
                row[lo : hi + 1] = True
    return mask


def fill_layer(
    contours: list[Contour], color: tuple[int, int, int, int], target: RasterRGBA
) -> RasterRGBA:
    """Overwrite target pixels whose centers are inside the contour set."""
    h, w = target.shape[:2]
    m = region_mask(contours, w, h)
    target[m] = np.asarray(color, dtype=np.uint8)
    return target


def render_frame(plan: RenderPlan, width: int, height: int) -> RasterRGBA:
    """Painter's-order fill over a fully transparent canvas."""
    canvas = new_canvas(width, height)
    for label_id, contours in plan.layers:
        color = plan.palette.colors.get(label_id)
        if color is None:
            raise RenderError(f"no color for label {label_id}")
        fill_layer(contours, color, canvas)
    return canvas


def _guide_color(index: int) -> tuple[int, int, int, int]:
    hue = (index * 0.618033988749895) % 1.0  # golden-angle spacing
    r, g, b = colorsys.hsv_to_rgb(hue, 0.65, 0.95)
    return int(round(r * 255)), int(round(g * 255)), int(round(b * 255)), 255


def _poly_centroid(vertices: np.ndarray) -> tuple[float, float]:
    v = np.asarray(vertices, dtype=np.float64)
    x, y = v[:, 0], v[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    cross = x * yn - xn * y
    s = cross.sum()
    if s == 0.0:
        return float(x.mean()), float(y.mean())
    cx = float(((x + xn) * cross).sum() / (3.0 * s))
    cy = float(((y + yn) * cross).sum() / (3.0 * s))
    return cx, cy


def _anchor_pixel(region: np.ndarray, cx: float, cy: float):
    """Pixel holding the centroid if interior, else the nearest interior
    pixel by center distance (ties: smallest (y, x))."""
    h, w = region.shape
    px, py = int(math.floor(cx)), int(math.floor(cy))
    if 0 <= px < w and 0 <= py < h and region[py, px]:
        return px, py
    interior = np.argwhere(region)  # sorted by (y, x) already
    if len(interior) == 0:
        return None
    centers_x = interior[:, 1] + 0.5
    centers_y = interior[:, 0] + 0.5
    d2 = (centers_x - cx) ** 2 + (centers_y - cy) ** 2
    best = int(np.argmin(d2))  # first minimum = smallest (y, x)
    return int(interior[best, 1]), int(interior[best, 0])


def _draw_numeral(canvas: RasterRGBA, text: str, ax: int, ay: int, color) -> None:
    h, w = canvas.shape[:2]
    block_w = 6 * len(text) - 1
    x0 = ax - block_w // 2
    y0 = ay - 3
    for k, ch in enumerate(text):
        glyph = _FONT_5X7[ch]
        gx = x0 + 6 * k
        for row in range(7):
            for col in range(5):
                if glyph[row][col] == "1":
                    x, y = gx + col, y0 + row
                    if 0 <= x < w and 0 <= y < h:
                        canvas[y, x] = color


def render_id_guide(plan: RenderPlan, width: int, height: int) -> RasterRGBA:
    """Debug view: distinct auto colors per layer plus each label's numeric
    ID at the centroid of its largest contour (nearest interior pixel when
    the centroid falls outside the region)."""
    canvas = new_canvas(width, height)
    fills = []
    for i, (label_id, contours) in enumerate(plan.layers):
        color = _guide_color(i)
        m = region_mask(contours, width, height)
        canvas[m] = np.asarray(color, dtype=np.uint8)
        fills.append((label_id, contours, m, color))
    for label_id, contours, m, color in fills:
        usable = [c for c in contours if len(c.vertices) >= 3]
        if not usable:
            continue
        largest = max(usable, key=contour_area)
        cx, cy = _poly_centroid(largest.vertices)
        anchor = _anchor_pixel(m, cx, cy)
        if anchor is None:
            continue
        lum = 0.299 * color[0] + 0.587 * color[1] + 0.114 * color[2]
        glyph_color = (0, 0, 0, 255) if lum >= 128 else (255, 255, 255, 255)
        _draw_numeral(canvas, str(label_id), anchor[0], anchor[1], np.asarray(glyph_color, dtype=np.uint8))
    return canvas
