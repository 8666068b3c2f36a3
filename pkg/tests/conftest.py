"""Shared fixtures and synthetic input builders."""

from __future__ import annotations

import json

import numpy as np
import pytest

from lester.maskio import FrameSequence, write_mask_sequence


def make_moving_square_clip(n_frames=10, size=64, side=40, step=2, label=1):
    """Square of `side` px translating `step` px/frame to the right."""
    frames = []
    for k in range(n_frames):
        m = np.zeros((size, size), dtype=np.uint8)
        x = k * step
        m[10 : 10 + side, x : x + side] = label
        frames.append(m)
    return FrameSequence(frames=frames)


def make_two_region_clip(n_frames=10, size=64):
    """Two rigid regions translating in opposite directions, labels 1 and 2."""
    frames = []
    for k in range(n_frames):
        m = np.zeros((size, size), dtype=np.uint8)
        m[4 : 24, 4 + k : 24 + k] = 1
        m[36 : 60, 30 - k : 58 - k] = 2
        frames.append(m)
    return FrameSequence(frames=frames)


def permute_labels(frames, rng):
    """Apply an independent random permutation of the used labels per frame."""
    out = []
    for m in frames:
        labels = [int(v) for v in np.unique(m) if v != 0]
        perm = list(labels)
        rng.shuffle(perm)
        lut = np.arange(256, dtype=np.uint8)
        for src, dst in zip(labels, perm):
            lut[src] = dst
        out.append(lut[m])
    return out


def write_clip_inputs(tmp_path, frames, manifest_entries, palette_map, landmarks=None):
    """Materialize a full input set on disk; returns a dict of paths."""
    masks = tmp_path / "masks"
    write_mask_sequence(FrameSequence(frames=list(frames)), masks)
    manifest = tmp_path / "manifest.json"
    manifest.write_text(json.dumps([{"id": i, "name": n} for i, n in manifest_entries]))
    palette = tmp_path / "palette.json"
    palette.write_text(json.dumps(palette_map))
    paths = {
        "masks": str(masks),
        "manifest": str(manifest),
        "palette": str(palette),
        "out": str(tmp_path / "out"),
    }
    if landmarks is not None:
        lm = tmp_path / "landmarks.json"
        lm.write_text(json.dumps(landmarks))
        paths["landmarks"] = str(lm)
    return paths


@pytest.fixture
def rng():
    return np.random.default_rng(20260815)


def random_star_polygon(rng, width, height, n_min=5, n_max=12):
    """Integer-coordinate star-shaped polygon, simple by construction."""
    cx = rng.uniform(width * 0.35, width * 0.65)
    cy = rng.uniform(height * 0.35, height * 0.65)
    n = int(rng.integers(n_min, n_max + 1))
    step = 2.0 * np.pi / n
    verts = []
    for i in range(n):
        ang = i * step + rng.uniform(0.05, 0.95) * step
        r = rng.uniform(3.0, min(width, height) * 0.4)
        x = int(round(cx + r * np.cos(ang)))
        y = int(round(cy + r * np.sin(ang)))
        if not verts or verts[-1] != (x, y):
            verts.append((x, y))
    if len(verts) > 2 and verts[0] == verts[-1]:
        verts.pop()
    return verts
