"""Objective temporal-consistency proxies emitted as report.json.

These are computable stand-ins for subjective viewer scoring (which cannot
be reproduced offline); the report says so in its `note` field.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .maskio import FrameSequence
from .tracker import _pair_counts

REPORT_NOTE = (
    "Objective proxies for temporal/shape consistency; not comparable to "
    "subjective viewer scores."
)

FLIP_IOU = 0.5


def _frame_pair_ious(prev: np.ndarray, curr: np.ndarray) -> dict[int, dict[int, float]]:
    """IoU of every (prev-label, curr-label) region pair, zero pairs omitted."""
    counts = _pair_counts(prev, curr)
    areas_prev = counts.sum(axis=1)
    areas_curr = counts.sum(axis=0)
    out: dict[int, dict[int, float]] = {}
    for p in (int(v) for v in np.flatnonzero(areas_prev) if v != 0):
        row = {}
        for c in (int(v) for v in np.flatnonzero(areas_curr) if v != 0):
            inter = int(counts[p, c])
            if inter:
                union = int(areas_prev[p]) + int(areas_curr[c]) - inter
                row[c] = inter / union
        out[p] = row
    return out


def per_frame_label_ious(seq: FrameSequence) -> list[dict[int, float]]:
    """For each frame f >= 1: label -> IoU of that label's region with its
    own previous-frame region, over labels present in either frame."""
    results = []
    for f in range(1, len(seq.frames)):
        prev, curr = seq.frames[f - 1], seq.frames[f]
        labels = {int(v) for v in np.unique(prev) if v != 0}
        labels |= {int(v) for v in np.unique(curr) if v != 0}
        pairs = _frame_pair_ious(prev, curr)
        results.append({lab: pairs.get(lab, {}).get(lab, 0.0) for lab in sorted(labels)})
    return results


def label_flip_count(seq: FrameSequence) -> int:
    """Count identity-swap events: a label's own-region IoU drops below 0.5
    while some other label overlaps its old region above 0.5."""
    flips = 0
    for f in range(1, len(seq.frames)):
        prev, curr = seq.frames[f - 1], seq.frames[f]
        pairs = _frame_pair_ious(prev, curr)
        for lab, row in pairs.items():
            own = row.get(lab, 0.0)
            if own < FLIP_IOU and any(
                other != lab and score > FLIP_IOU for other, score in row.items()
            ):
                flips += 1
    return flips


def mean_vertex_count(contour_sets) -> float:
    """Average vertex count over all retained contours across all frames.

    Accepts per-frame lists of contours (or of per-submask contour lists).
    """
    total = 0
    count = 0
    for frame_set in contour_sets:
        for item in frame_set:
            if isinstance(item, list):
                for c in item:
                    total += len(c.vertices)
                    count += 1
            else:
                total += len(item.vertices)
                count += 1
    return total / count if count else 0.0


@dataclass
class ConsistencyReport:
    frames: int
    label_flip_count: int
    mean_region_iou: float
    mean_vertex_count: float
    per_frame: list[dict[int, float]] = field(default_factory=list)
    note: str = REPORT_NOTE

    def to_json_dict(self) -> dict:
        return {
            "note": self.note,
            "frames": self.frames,
            "label_flip_count": self.label_flip_count,
            "mean_region_iou": self.mean_region_iou,
            "mean_vertex_count": self.mean_vertex_count,
            "per_frame": [
                {"frame": f + 1, "iou": {str(k): v for k, v in ious.items()}}
                for f, ious in enumerate(self.per_frame)
            ],
        }


def build_report(seq: FrameSequence, contour_sets) -> ConsistencyReport:
    per_frame = per_frame_label_ious(seq)
    all_ious = [v for frame in per_frame for v in frame.values()]
    return ConsistencyReport(
        frames=len(seq.frames),
        label_flip_count=label_flip_count(seq),
        mean_region_iou=float(np.mean(all_ious)) if all_ious else 0.0,
        mean_vertex_count=mean_vertex_count(contour_sets),
        per_frame=per_frame,
    )
