"""Mask-sequence, manifest, palette and landmark I/O.

Label masks travel as 8-bit single-channel (or indexed) PNGs whose pixel
value is the label ID, 0 being background. Rendered frames are written as
8-bit RGBA PNGs with a fully transparent background.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image

from .errors import MaskValidationError, ParseError, SequenceError

# A label mask is a (height, width) uint8 grid of label IDs.
LabelMask = np.ndarray

_FRAME_RE = re.compile(r"^frame_(\d{4,})\.png$")

DEFAULT_SHADOW_FACTOR = 0.5
DEFAULT_SHADOW_DX = 8


@dataclass(frozen=True)
class LabelTable:
    """Ordered (id, name) entries; list order is render z-order, back to front."""

    entries: tuple[tuple[int, str], ...]

    @property
    def ids(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, label_id: int) -> bool:
        return label_id in self.ids


@dataclass(frozen=True)
class Palette:
    colors: dict[int, tuple[int, int, int, int]]
    shadow_factor: float = DEFAULT_SHADOW_FACTOR
    shadow_dx: int = DEFAULT_SHADOW_DX


@dataclass(frozen=True)
class LandmarkSet:
    """Exactly 68 (x, y) points in iBUG-68 order; may lie outside the frame."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.shape != (68, 2):
            raise ValueError(f"expected 68 landmarks, got {len(pts)}")
        if not np.isfinite(pts).all():
            raise ValueError("landmark coordinates must be finite")
        object.__setattr__(self, "points", pts)


@dataclass
class FrameSequence:
    frames: list[LabelMask] = field(default_factory=list)
    fps: float = 24.0

    def __post_init__(self):
        if not self.frames:
            raise SequenceError("frame sequence is empty")
        h, w = self.frames[0].shape
        for i, f in enumerate(self.frames):
            if f.shape != (h, w):
                raise SequenceError(
                    f"frame {i}: dimensions {f.shape[1]}x{f.shape[0]} differ "
                    f"from frame 0 ({w}x{h})"
                )

    @property
    def size(self) -> tuple[int, int]:
        h, w = self.frames[0].shape
        return w, h


def parse_manifest(text: bytes | str) -> LabelTable:
    """Parse the ordered label manifest (JSON array of {"id", "name"})."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"manifest is not valid JSON: {e}") from e
    if not isinstance(data, list):
        raise ParseError("manifest must be a JSON array")
    entries = []
    seen_ids: set[int] = set()
    seen_names: set[str] = set()
    for item in data:
        if not isinstance(item, dict) or set(item) != {"id", "name"}:
            raise ParseError(f"manifest entry must be {{'id', 'name'}}: {item!r}")
        label_id, name = item["id"], item["name"]
        if not isinstance(label_id, int) or isinstance(label_id, bool):
            raise ParseError(f"manifest id must be an integer: {label_id!r}")
        if not 1 <= label_id <= 255:
            raise ParseError(f"manifest id {label_id} outside 1..255")
        if not isinstance(name, str) or not name:
            raise ParseError(f"manifest name must be a nonempty string: {name!r}")
        if label_id in seen_ids:
            raise ParseError(f"duplicate manifest id {label_id}")
        if name in seen_names:
            raise ParseError(f"duplicate manifest name {name!r}")
        seen_ids.add(label_id)
        seen_names.add(name)
        entries.append((label_id, name))
    return LabelTable(entries=tuple(entries))


def parse_hex_color(value: str) -> tuple[int, int, int, int]:
    """\"#RRGGBB\" or \"#RRGGBBAA\" to an RGBA tuple (alpha defaults to 255)."""
    if not isinstance(value, str) or not re.fullmatch(r"#[0-9a-fA-F]{6}([0-9a-fA-F]{2})?", value):
        raise ParseError(f"malformed color {value!r}, expected #RRGGBB")
    r = int(value[1:3], 16)
    g = int(value[3:5], 16)
    b = int(value[5:7], 16)
    a = int(value[7:9], 16) if len(value) == 9 else 255
    return r, g, b, a


def parse_palette(text: bytes | str) -> Palette:
    """Parse label colors plus optional shadow settings.

    Keys are label IDs as decimal strings mapping to "#RRGGBB" (an 8-digit
    form overrides alpha); the reserved key "shadow" holds
    {"factor": float, "dx": int}.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"palette is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise ParseError("palette must be a JSON object")
    colors: dict[int, tuple[int, int, int, int]] = {}
    factor = DEFAULT_SHADOW_FACTOR
    dx = DEFAULT_SHADOW_DX
    for key, value in data.items():
        if key == "shadow":
            if not isinstance(value, dict) or not set(value) <= {"factor", "dx"}:
                raise ParseError(f"shadow settings must be {{'factor', 'dx'}}: {value!r}")
            if "factor" in value:
                factor = float(value["factor"])
                if not 0.0 <= factor <= 1.0:
                    raise ParseError(f"shadow factor {factor} outside 0..1")
            if "dx" in value:
                if not isinstance(value["dx"], int) or isinstance(value["dx"], bool):
                    raise ParseError(f"shadow dx must be an integer: {value['dx']!r}")
                dx = value["dx"]
            continue
        try:
            label_id = int(key)
        except ValueError:
            raise ParseError(f"palette key {key!r} is not a label id") from None
        if not 1 <= label_id <= 255:
            raise ParseError(f"palette id {label_id} outside 1..255")
        if label_id in colors:
            raise ParseError(f"duplicate palette id {label_id}")
        colors[label_id] = parse_hex_color(value)
    return Palette(colors=colors, shadow_factor=factor, shadow_dx=dx)


def load_landmarks(text: bytes | str) -> dict[int, LandmarkSet]:
    """Parse per-frame landmark arrays; absent frames simply have no entry."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"landmarks file is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise ParseError("landmarks file must be a JSON object")
    out: dict[int, LandmarkSet] = {}
    for key, pts in data.items():
        try:
            frame = int(key)
        except ValueError:
            raise ParseError(f"landmark key {key!r} is not a frame index") from None
        if frame < 0:
            raise ParseError(f"landmark frame index {frame} is negative")
        if not isinstance(pts, list) or len(pts) != 68:
            raise MaskValidationError(
                f"frame {frame}: expected 68 landmarks, got "
                f"{len(pts) if isinstance(pts, list) else 'non-array'}"
            )
        for p in pts:
            if not isinstance(p, list) or len(p) != 2:
                raise ParseError(f"frame {frame}: landmark {p!r} is not an [x, y] pair")
        out[frame] = LandmarkSet(points=np.array(pts, dtype=np.float64))
    return out


def _read_mask_png(path: Path) -> LabelMask:
    with Image.open(path) as img:
        if img.mode not in ("L", "P"):
            raise MaskValidationError(
                f"{path.name}: mode {img.mode} is not 8-bit single-channel or indexed"
            )
        # For indexed images the raw palette index is the label ID.
        return np.asarray(img, dtype=np.uint8)


def load_mask_sequence(
    dir: Path | str, manifest: LabelTable | None, fps: float = 24.0
) -> FrameSequence:
    """Load frame_0000.png .. frame_NNNN.png and validate IDs against the manifest.

    A manifest of None skips ID validation (used by dry-run diagnostics when
    the manifest itself failed to parse).
    """
    dir = Path(dir)
    if not dir.is_dir():
        raise SequenceError(f"mask directory {dir} does not exist")
    indexed: dict[int, Path] = {}
    for entry in dir.iterdir():
        m = _FRAME_RE.match(entry.name)
        if m:
            indexed[int(m.group(1))] = entry
    if not indexed:
        raise SequenceError(f"no frame_NNNN.png files in {dir}")
    count = max(indexed) + 1
    for i in range(count):
        if i not in indexed:
            raise SequenceError(f"missing frame_{i:04d}")
    allowed = np.zeros(256, dtype=bool)
    allowed[0] = True
    if manifest is None:
        allowed[:] = True
    else:
        for label_id in manifest.ids:
            allowed[label_id] = True
    frames = []
    for i in range(count):
        mask = _read_mask_png(indexed[i])
        present = np.unique(mask)
        unknown = [int(v) for v in present if not allowed[v]]
        if unknown:
            raise MaskValidationError(f"frame {i}: unknown label {unknown[0]}")
        frames.append(mask)
    return FrameSequence(frames=frames, fps=fps)


def write_mask_sequence(seq: FrameSequence, dir: Path | str) -> None:
    """Inverse of load_mask_sequence: write frames as 8-bit grayscale PNGs."""
    dir = Path(dir)
    dir.mkdir(parents=True, exist_ok=True)
    for i, mask in enumerate(seq.frames):
        Image.fromarray(mask, mode="L").save(dir / f"frame_{i:04d}.png", format="PNG")


def write_frame_png(image: np.ndarray, path: Path | str) -> None:
    """Write an (h, w, 4) uint8 raster as RGBA PNG with fixed encoder settings."""
    image = np.asarray(image)
    if image.ndim != 3 or image.shape[2] != 4 or image.dtype != np.uint8:
        raise ValueError(f"expected (h, w, 4) uint8 raster, got {image.shape} {image.dtype}")
    h, w = image.shape[:2]
    if h == 0 or w == 0:
        raise ValueError("image dimensions must be positive")
    Image.fromarray(image, mode="RGBA").save(Path(path), format="PNG")


def read_frame_png(path: Path | str) -> np.ndarray:
    """Read an RGBA PNG back into an (h, w, 4) uint8 raster."""
    with Image.open(path) as img:
        return np.asarray(img.convert("RGBA"), dtype=np.uint8)
