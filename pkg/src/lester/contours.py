"""Submask splitting, contour tracing, dilation, and polygon simplification.

Contours are closed polygons on the pixel-corner lattice: a pixel (x, y)
occupies the unit square [x, x+1) x [y, y+1), and traced vertices are the
corner points where the boundary turns. This makes even-odd filling at
pixel centers reproduce the source bitmap exactly, including single-pixel
features, which pixel-center chains cannot do.

Orientation is measured by the signed shoelace sum on raw (x, y) values:
outer contours come out positive (counter-clockwise), holes negative
(clockwise).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

DEFAULT_MIN_AREA = 16.0
DEFAULT_TOLERANCE = 2.0

# Walk directions: 0=east(+x), 1=south(+y), 2=west(-x), 3=north(-y).
_STEP = ((1, 0), (0, 1), (-1, 0), (0, -1))


@dataclass
class SubMask:
    label_id: int
    bitmap: np.ndarray  # (h, w) bool


@dataclass(eq=False)
class Contour:
    """Closed polygon; `parent` is the index of the enclosing outer for holes."""

    vertices: np.ndarray  # (n, 2) int32, columns (x, y), implicitly closed
    role: str  # "outer" | "hole"
    parent: int | None = None


@dataclass(frozen=True)
class SimplifyParams:
    alpha: float = DEFAULT_MIN_AREA  # minimum contour area, px^2
    t: float = DEFAULT_TOLERANCE  # DP tolerance, px

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError(f"alpha {self.alpha} must be >= 0")
        if self.t < 0:
            raise ValueError(f"tolerance {self.t} must be >= 0")


def split_submasks(mask: np.ndarray, order=None) -> list[SubMask]:
    """One SubMask per distinct nonzero label, ordered by `order` (z-order).

    `order` is an iterable of label IDs (e.g. LabelTable.ids); labels present
    in the mask but absent from `order` are appended in ascending ID order.
    Without `order`, ascending ID order is used.
    """
    present = [int(v) for v in np.unique(mask) if v != 0]
    if order is not None:
        ordered = [i for i in order if i in present]
        ordered += [i for i in present if i not in ordered]
    else:
        ordered = present
    return [SubMask(label_id=i, bitmap=mask == i) for i in ordered]


def _shift_or(dst: np.ndarray, src: np.ndarray, ox: int, oy: int) -> None:
    h, w = src.shape
    ys = slice(max(oy, 0), h + min(oy, 0))
    xs = slice(max(ox, 0), w + min(ox, 0))
    ys_src = slice(max(-oy, 0), h + min(-oy, 0))
    xs_src = slice(max(-ox, 0), w + min(-ox, 0))
    dst[ys, xs] |= src[ys_src, xs_src]


def dilate(sub: SubMask) -> SubMask:
    """Morphological dilation by an all-ones 4x4 element anchored at (1, 1).

    Output (x, y) is set iff any input pixel lies in x-2..x+1, y-2..y+1;
    out-of-bounds input is unset.
    """
    src = np.asarray(sub.bitmap, dtype=bool)
    out = np.zeros_like(src)
    for oy in (-1, 0, 1, 2):
        for ox in (-1, 0, 1, 2):
            _shift_or(out, src, ox, oy)
    return SubMask(label_id=sub.label_id, bitmap=out)


def _walk(flat: bytes, stride: int, w: int, sx: int, sy: int, sd: int, visited: bytearray):
    """Follow one closed crack loop; returns its turn-point vertices.

    At each lattice point the next direction depends on the two pixels ahead:
    left-front set -> turn left, else right-front set -> go straight, else
    turn right. This single rule yields 8-connected foreground and
    4-connected holes. Only horizontal cracks are marked visited, keyed by
    their left end; that is enough to dedupe starts, which are horizontal.
    """
    ring = (1, stride + 1, stride, 0)  # pixel NE, SE, SW, NW of a lattice point
    verts = []
    x, y, d = sx, sy, sd
    while True:
        if d == 0:
            visited[y * w + x] = 1
            x += 1
        elif d == 1:
            y += 1
        elif d == 2:
            x -= 1
            visited[y * w + x] = 1
        else:
            y -= 1
        base = y * stride + x
        if flat[base + ring[d]]:
            nd = (d - 1) & 3
        elif flat[base + ring[(d + 1) & 3]]:
            nd = d
        else:
            nd = (d + 1) & 3
        if nd != d:
            verts.append((x, y))
            d = nd
        if x == sx and y == sy and d == sd:
            return verts


def trace_contours(sub: SubMask) -> list[Contour]:
    """All outer and hole borders of every connected component, with parents.

    Discovery is raster-scan order, so output order is deterministic. Holes
    carry the index of their enclosing outer contour in the returned list.
    """
    bm = np.asarray(sub.bitmap, dtype=bool)
    h, w = bm.shape
    if not bm.any():
        return []
    padded = np.zeros((h + 2, w + 2), dtype=np.uint8)
    padded[1:-1, 1:-1] = bm
    # Pixel (x, y) lives at flat[(y + 1) * stride + (x + 1)]; the ring offsets
    # in _walk are relative to a lattice point's y * stride + x base.
    flat = padded.tobytes()
    stride = w + 2

    comp, _ = ndimage.label(bm, structure=np.ones((3, 3), dtype=int))
    above = padded[0:h, 1 : w + 1].astype(bool)
    below = padded[2 : h + 2, 1 : w + 1].astype(bool)
    north = bm & ~above
    south = bm & ~below

    visited = bytearray(w * (h + 1))
    contours: list[Contour] = []
    outer_of_comp: dict[int, int] = {}
    candidates = np.nonzero(north | south)
    for y, x in zip(*(c.tolist() for c in candidates)):
        if north[y, x] and not visited[y * w + x]:
            verts = _walk(flat, stride, w, x, y, 0, visited)
            outer_of_comp[int(comp[y, x])] = len(contours)
            contours.append(
                Contour(vertices=np.array(verts, dtype=np.int32), role="outer")
            )
        if south[y, x] and not visited[(y + 1) * w + x]:
            verts = _walk(flat, stride, w, x + 1, y + 1, 2, visited)
            parent = outer_of_comp[int(comp[y, x])]
            contours.append(
                Contour(vertices=np.array(verts, dtype=np.int32), role="hole", parent=parent)
            )
    return contours


def signed_area(vertices: np.ndarray) -> float:
    """Signed shoelace sum / 2; positive for counter-clockwise vertex order."""
    v = np.asarray(vertices, dtype=np.float64)
    if len(v) < 3:
        return 0.0
    x, y = v[:, 0], v[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    return float(np.sum(x * yn - xn * y) / 2.0)


def contour_area(c: Contour) -> float:
    """Absolute shoelace area; degenerate (< 3 vertex) contours count as 0."""
    return abs(signed_area(c.vertices))


def _seg_dist2(points: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Squared distance from each point to segment a-b (not the infinite line)."""
    dx = b[0] - a[0]
    dy = b[1] - a[1]
    length2 = dx * dx + dy * dy
    px = points[:, 0] - a[0]
    py = points[:, 1] - a[1]
    if length2 == 0.0:
        return px * px + py * py
    tt = np.clip((px * dx + py * dy) / length2, 0.0, 1.0)
    ex = px - tt * dx
    ey = py - tt * dy
    return ex * ex + ey * ey


def _dp_open(points: np.ndarray, t: float) -> np.ndarray:
    """Classic DP on an open chain; keeps a vertex iff its span's max
    deviation exceeds t (first-max index wins ties)."""
    n = len(points)
    keep = np.zeros(n, dtype=bool)
    keep[0] = keep[-1] = True
    if n <= 2:
        return points.copy()
    t2 = t * t
    stack = [(0, n - 1)]
    while stack:
        lo, hi = stack.pop()
        if hi - lo < 2:
            continue
        interior = points[lo + 1 : hi]
        d2 = _seg_dist2(interior, points[lo], points[hi])
        i = int(np.argmax(d2))
        if d2[i] > t2:
            mid = lo + 1 + i
            keep[mid] = True
            stack.append((lo, mid))
            stack.append((mid, hi))
    return points[keep]


def simplify_open_chain(points: np.ndarray, t: float) -> np.ndarray:
    """Douglas-Peucker on an open polyline; endpoints always survive."""
    pts = np.asarray(points, dtype=np.float64)
    if t < 0:
        raise ValueError(f"tolerance {t} must be >= 0")
    return _dp_open(pts, float(t))


def simplify_dp(c: Contour, t: float) -> Contour:
    """Closed-ring DP: split at vertex 0 and the vertex farthest from it,
    simplify both halves as open chains, rejoin."""
    pts = c.vertices
    if len(pts) < 3:
        raise ValueError(f"contour must have >= 3 vertices, got {len(pts)}")
    if t < 0:
        raise ValueError(f"tolerance {t} must be >= 0")
    fpts = pts.astype(np.float64)
    d2 = np.sum((fpts - fpts[0]) ** 2, axis=1)
    k = int(np.argmax(d2))  # first max on ties
    if k == 0:
        # All vertices coincide; nothing to split on.
        return Contour(vertices=pts[:1].copy(), role=c.role, parent=c.parent)
    first = _dp_open(fpts[: k + 1], float(t))
    ring = np.concatenate([fpts[k:], fpts[:1]], axis=0)
    second = _dp_open(ring, float(t))
    joined = np.concatenate([first, second[1:-1]], axis=0)
    # Subset property: map kept float rows back to the original int vertices.
    out = joined.astype(pts.dtype)
    return Contour(vertices=out, role=c.role, parent=c.parent)


def can_simplify(c: Contour, t: float) -> bool:
    """True iff DP at tolerance t leaves a usable polygon
    (>= 3 vertices and nonzero area)."""
    if len(c.vertices) < 3:
        return False
    s = simplify_dp(c, t)
    return len(s.vertices) >= 3 and signed_area(s.vertices) != 0.0


def simplify_all(submasks: list[SubMask], params: SimplifyParams) -> list[list[Contour]]:
    """Per submask: dilate, trace, drop contours with area <= alpha, then
    simplify each survivor (keeping the dilated original when DP would
    degenerate it). Hole parent links are remapped to the filtered list."""
    results: list[list[Contour]] = []
    for sub in submasks:
        traced = trace_contours(dilate(sub))
        index_map: dict[int, int] = {}
        kept: list[Contour] = []
        for idx, contour in enumerate(traced):
            if contour_area(contour) <= params.alpha:
                continue
            if contour.role == "hole":
                # A hole is strictly inside its outer, so the outer's area is
                # larger and it always survives the same filter.
                parent = index_map[contour.parent]
            else:
                parent = None
            out = simplify_dp(contour, params.t) if can_simplify(contour, params.t) else contour
            out.parent = parent
            index_map[idx] = len(kept)
            kept.append(out)
        results.append(kept)
    return results
