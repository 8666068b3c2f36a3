"""Optional finishing passes: shadow, schematic facial features, pixelation.

Applied in fixed order shadow -> features -> pixelation. All transforms are
pure per-frame functions on (h, w, 4) uint8 RGBA rasters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .maskio import DEFAULT_SHADOW_DX, DEFAULT_SHADOW_FACTOR, LandmarkSet

DEFAULT_FEATURE_COLOR = (0, 0, 0, 255)
DEFAULT_FEATURE_THICKNESS = 2
DEFAULT_PIXELATE_FACTOR = 4

# iBUG-68 groups drawn as schematic features; the jaw (0-16) is omitted.
_OPEN_CHAINS = ((17, 21), (22, 26), (27, 35))  # brows, nose bridge+base
_CLOSED_LOOPS = ((36, 41), (42, 47), (48, 59))  # eyes, outer mouth


@dataclass(frozen=True)
class EffectConfig:
    """Effect switches and parameters.

    shadow_factor/shadow_dx of None mean "use the palette's shadow
    settings"; the pipeline resolves them before applying.
    """

    shadow_enabled: bool = False
    shadow_factor: float | None = None
    shadow_dx: int | None = None
    features_enabled: bool = False
    feature_color: tuple[int, int, int, int] = DEFAULT_FEATURE_COLOR
    feature_thickness: int = DEFAULT_FEATURE_THICKNESS
    pixelate_factor: int = 1

    def __post_init__(self):
        if self.shadow_factor is not None and not 0.0 <= self.shadow_factor <= 1.0:
            raise ValueError(f"shadow factor {self.shadow_factor} outside 0..1")
        if self.feature_thickness < 1:
            raise ValueError(f"feature thickness {self.feature_thickness} must be >= 1")
        if self.pixelate_factor < 1:
            raise ValueError(f"pixelate factor {self.pixelate_factor} must be >= 1")


def apply_shadow(img: np.ndarray, factor: float, dx: int) -> np.ndarray:
    """Composite a brightness-scaled copy displaced by (dx, 0) under img.

    Where the original has any alpha it wins outright, so the visible
    shadow is exactly the displaced silhouette sticking out past the
    original. Positive dx displaces right.
    """
    h, w = img.shape[:2]
    shadow = np.zeros_like(img)
    if abs(dx) < w:
        if dx >= 0:
            shadow[:, dx:] = img[:, : w - dx]
        else:
            shadow[:, :dx] = img[:, -dx:]
    rgb = shadow[..., :3].astype(np.float64)
    shadow[..., :3] = np.floor(rgb * factor + 0.5).astype(np.uint8)
    visible = img[..., 3:4] > 0
    return np.where(visible, img, shadow)


def _line_pixels(x0: int, y0: int, x1: int, y1: int):
    """Midpoint/Bresenham rasterization resolved exactly in integers.

    Per column of the major axis the minor coordinate is
    floor(exact + 1/2); ties round toward +axis. The rule is symmetric in
    segment direction, so (p, q) and (q, p) draw the same pixels.
    """
    if abs(x1 - x0) >= abs(y1 - y0):
        if x0 > x1:
            x0, y0, x1, y1 = x1, y1, x0, y0
        dx, dy = x1 - x0, y1 - y0
        if dx == 0:
            return [(x0, y0)]
        return [(x0 + k, y0 + (2 * dy * k + dx) // (2 * dx)) for k in range(dx + 1)]
    if y0 > y1:
        x0, y0, x1, y1 = x1, y1, x0, y0
    dx, dy = x1 - x0, y1 - y0
    return [(x0 + (2 * dx * k + dy) // (2 * dy), y0 + k) for k in range(dy + 1)]


def _stamp(canvas: np.ndarray, points, offsets, color) -> None:
    h, w = canvas.shape[:2]
    for px, py in points:
        for oy in offsets:
            y = py + oy
            if not 0 <= y < h:
                continue
            for ox in offsets:
                x = px + ox
                if 0 <= x < w:
                    canvas[y, x] = color


def draw_facial_features(
    img: np.ndarray,
    lm: LandmarkSet,
    color: tuple[int, int, int, int] = DEFAULT_FEATURE_COLOR,
    thickness: int = DEFAULT_FEATURE_THICKNESS,
) -> np.ndarray:
    """Draw brow/nose polylines and eye/mouth loops; out-of-frame parts clip."""
    if thickness < 1:
        raise ValueError(f"thickness {thickness} must be >= 1")
    out = img.copy()
    pts = [(int(math.floor(x + 0.5)), int(math.floor(y + 0.5))) for x, y in lm.points]
    offsets = range(-(thickness // 2), thickness - thickness // 2)
    rgba = np.asarray(color, dtype=np.uint8)
    for lo, hi in _OPEN_CHAINS:
        for i in range(lo, hi):
            _stamp(out, _line_pixels(*pts[i], *pts[i + 1]), offsets, rgba)
    for lo, hi in _CLOSED_LOOPS:
        for i in range(lo, hi):
            _stamp(out, _line_pixels(*pts[i], *pts[i + 1]), offsets, rgba)
        _stamp(out, _line_pixels(*pts[hi], *pts[lo]), offsets, rgba)
    return out


def _axis_samples(size: int, small: int, factor: int):
    u = (np.arange(small) + 0.5) * factor - 0.5  # block centers in source coords
    i0 = np.floor(u).astype(np.int64)
    frac = u - i0
    i0 = np.clip(i0, 0, size - 1)
    i1 = np.minimum(i0 + 1, size - 1)
    return i0, i1, frac


def pixelate(img: np.ndarray, factor: int) -> np.ndarray:
    """Bilinear downscale to ceil(size/factor), nearest-neighbor upscale back.

    Downscale samples at block centers (clamped at edges), so every aligned
    factor x factor block of the output is constant and factor 1 is the
    identity.
    """
    h, w = img.shape[:2]
    if factor < 1:
        raise ValueError(f"pixelate factor {factor} must be >= 1")
    if factor > min(w, h):
        raise ValueError(f"pixelate factor {factor} exceeds min dimension {min(w, h)}")
    if factor == 1:
        return img.copy()
    h2 = -(-h // factor)
    w2 = -(-w // factor)
    y0, y1, wy = _axis_samples(h, h2, factor)
    x0, x1, wx = _axis_samples(w, w2, factor)
    src = img.astype(np.float64)
    rows = src[y0] * (1.0 - wy)[:, None, None] + src[y1] * wy[:, None, None]
    small = rows[:, x0] * (1.0 - wx)[None, :, None] + rows[:, x1] * wx[None, :, None]
    small = np.floor(small + 0.5).astype(np.uint8)
    ys = np.arange(h) // factor
    xs = np.arange(w) // factor
    return small[ys[:, None], xs[None, :]]


def apply_effects(img: np.ndarray, cfg: EffectConfig, lm: LandmarkSet | None = None) -> np.ndarray:
    out = img
    if cfg.shadow_enabled:
        factor = cfg.shadow_factor if cfg.shadow_factor is not None else DEFAULT_SHADOW_FACTOR
        dx = cfg.shadow_dx if cfg.shadow_dx is not None else DEFAULT_SHADOW_DX
        out = apply_shadow(out, factor, dx)
    if cfg.features_enabled and lm is not None:
        out = draw_facial_features(out, lm, cfg.feature_color, cfg.feature_thickness)
    if cfg.pixelate_factor > 1:
        out = pixelate(out, cfg.pixelate_factor)
    return out
