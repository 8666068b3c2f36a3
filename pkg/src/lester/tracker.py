"""Temporal label consistency via greedy IoU matching.

Segmentation backends may emit arbitrary label IDs per frame; this module
renames each frame's labels so that a region keeps one canonical ID for as
long as it is trackable, and genuinely new regions get IDs never seen
before in the sequence.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .maskio import FrameSequence, LabelMask

DEFAULT_IOU_THRESHOLD = 0.3


@dataclass(frozen=True)
class LabelMapping:
    frame_index: int
    mapping: dict[int, int]  # incoming id -> canonical id, injective
    fresh: frozenset[int] = field(default_factory=frozenset)


def iou(a: np.ndarray, b: np.ndarray) -> float:
    """Intersection over union of two binary masks; 0.0 when both are empty."""
    a = np.asarray(a, dtype=bool)
    b = np.asarray(b, dtype=bool)
    if a.shape != b.shape:
        raise ValueError(f"mask dimensions differ: {a.shape} vs {b.shape}")
    inter = int(np.logical_and(a, b).sum())
    union = int(np.logical_or(a, b).sum())
    return inter / union if union else 0.0


def _pair_counts(prev: LabelMask, curr: LabelMask) -> np.ndarray:
    # Joint (prev_id, curr_id) pixel histogram in one bincount pass.
    joint = prev.astype(np.int32) * 256 + curr.astype(np.int32)
    return np.bincount(joint.ravel(), minlength=65536).reshape(256, 256)


def match_labels(
    prev: LabelMask,
    curr: LabelMask,
    threshold: float = DEFAULT_IOU_THRESHOLD,
    *,
    frame_index: int = 0,
    reserved_ids: set[int] | None = None,
) -> LabelMapping:
    """Greedily pair curr labels with prev labels by descending IoU.

    Pairs with IoU >= threshold are accepted in (descending IoU, prev id,
    curr id) order while both sides are unmatched. Unmatched curr labels
    receive fresh IDs: the lowest positive ID outside reserved_ids (which
    defaults to the labels of prev, and which relabel_sequence extends to
    every ID used anywhere earlier in the sequence).
    """
    if prev.shape != curr.shape:
        raise ValueError(f"mask dimensions differ: {prev.shape} vs {curr.shape}")
    if not 0.0 < threshold <= 1.0:
        raise ValueError(f"threshold {threshold} outside (0, 1]")
    counts = _pair_counts(prev, curr)
    areas_prev = counts.sum(axis=1)
    areas_curr = counts.sum(axis=0)
    prev_labels = [int(v) for v in np.flatnonzero(areas_prev) if v != 0]
    curr_labels = [int(v) for v in np.flatnonzero(areas_curr) if v != 0]

    candidates = []
    for p in prev_labels:
        for c in curr_labels:
            inter = int(counts[p, c])
            if inter == 0:
                continue
            union = int(areas_prev[p]) + int(areas_curr[c]) - inter
            candidates.append((inter / union, p, c))
    candidates.sort(key=lambda t: (-t[0], t[1], t[2]))

    mapping: dict[int, int] = {}
    matched_prev: set[int] = set()
    for score, p, c in candidates:
        if score < threshold:
            break
        if p in matched_prev or c in mapping:
            continue
        mapping[c] = p
        matched_prev.add(p)

    reserved = set(reserved_ids) if reserved_ids is not None else set(prev_labels)
    fresh: set[int] = set()
    for c in curr_labels:
        if c in mapping:
            continue
        n = 1
        while n in reserved:
            n += 1
        if n > 255:
            raise ValueError("label space exhausted: more than 255 IDs in use")
        mapping[c] = n
        fresh.add(n)
        reserved.add(n)
    return LabelMapping(frame_index=frame_index, mapping=mapping, fresh=frozenset(fresh))


def apply_mapping(mask: LabelMask, mapping: dict[int, int]) -> LabelMask:
    lut = np.arange(256, dtype=np.uint8)
    for src, dst in mapping.items():
        lut[src] = dst
    return lut[mask]


def relabel_sequence(seq: FrameSequence, threshold: float = DEFAULT_IOU_THRESHOLD) -> FrameSequence:
    """Relabel every frame against its relabeled predecessor.

    Frame 0 passes through unchanged. Fresh IDs never reuse an ID seen in
    any earlier frame, so a vanished region's ID is retired for good.
    Inherently sequential; pixel geometry is untouched.
    """
    frames = [seq.frames[0].copy()]
    used = {int(v) for v in np.unique(frames[0]) if v != 0}
    for k in range(1, len(seq.frames)):
        m = match_labels(
            frames[-1], seq.frames[k], threshold, frame_index=k, reserved_ids=used
        )
        relabeled = apply_mapping(seq.frames[k], m.mapping)
        frames.append(relabeled)
        used |= {int(v) for v in np.unique(relabeled) if v != 0}
    return FrameSequence(frames=frames, fps=seq.fps)
