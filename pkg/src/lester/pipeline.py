"""End-to-end batch pipeline: masks in, rendered RGBA frames out.

Relabeling is a sequential whole-sequence prepass (the tracker's contract);
per-frame geometry and rasterization then fan out across a thread pool.
Workers return encoded bytes and the main thread writes files strictly in
frame order, so a failure at frame k leaves no partial frame beyond k - 1
and outputs are byte-identical for any thread count.
"""

from __future__ import annotations

import io
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from PIL import Image

from .contours import SimplifyParams, simplify_all, split_submasks
from .effects import EffectConfig, apply_effects
from .errors import LesterError, PipelineError
from .maskio import (
    LabelTable,
    Palette,
    load_landmarks,
    load_mask_sequence,
    parse_manifest,
    parse_palette,
)
from .metrics import build_report
from .render import RenderPlan, render_frame, render_id_guide
from .tracker import DEFAULT_IOU_THRESHOLD, relabel_sequence


@dataclass
class PipelineConfig:
    masks_dir: Path
    manifest_path: Path
    palette_path: Path
    out_dir: Path
    landmarks_path: Path | None = None
    simplify: SimplifyParams = field(default_factory=SimplifyParams)
    effects: EffectConfig = field(default_factory=EffectConfig)
    iou_threshold: float = DEFAULT_IOU_THRESHOLD
    emit_guide: bool = False
    emit_report: bool = False
    dump_contours: bool = False
    threads: int = 1

    def __post_init__(self):
        self.masks_dir = Path(self.masks_dir)
        self.manifest_path = Path(self.manifest_path)
        self.palette_path = Path(self.palette_path)
        self.out_dir = Path(self.out_dir)
        if self.landmarks_path is not None:
            self.landmarks_path = Path(self.landmarks_path)
        if not 0.0 < self.iou_threshold <= 1.0:
            raise ValueError(f"iou threshold {self.iou_threshold} outside (0, 1]")
        if self.threads < 1:
            raise ValueError(f"threads {self.threads} must be >= 1")


@dataclass
class RunSummary:
    frames_written: int
    out_dir: str
    report_path: str | None
    elapsed_seconds: float


def _encode_png(image: np.ndarray) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(image, mode="RGBA").save(buf, format="PNG")
    return buf.getvalue()


def _contours_json(submasks, contour_sets) -> str:
    records = []
    for sub, contours in zip(submasks, contour_sets):
        for c in contours:
            records.append(
                {
                    "label_id": sub.label_id,
                    "role": c.role,
                    "parent": c.parent,
                    "vertices": c.vertices.tolist(),
                }
            )
    return json.dumps(records, indent=2)


def _resolve_effects(effects: EffectConfig, palette: Palette) -> EffectConfig:
    # Request-level None means "use the palette's shadow settings".
    factor = effects.shadow_factor if effects.shadow_factor is not None else palette.shadow_factor
    dx = effects.shadow_dx if effects.shadow_dx is not None else palette.shadow_dx
    return replace(effects, shadow_factor=factor, shadow_dx=dx)


def _process_frame(frame_index, mask, manifest, palette, cfg, effects, landmarks):
    stage = "split"
    try:
        submasks = split_submasks(mask, order=manifest.ids)
        stage = "simplify"
        contour_sets = simplify_all(submasks, cfg.simplify)
        h, w = mask.shape
        plan = RenderPlan(
            layers=[(s.label_id, cs) for s, cs in zip(submasks, contour_sets)],
            palette=palette,
        )
        stage = "render"
        image = render_frame(plan, w, h)
        guide_png = _encode_png(render_id_guide(plan, w, h)) if cfg.emit_guide else None
        stage = "effects"
        image = apply_effects(image, effects, landmarks)
        stage = "write"
        out_png = _encode_png(image)
        dump = _contours_json(submasks, contour_sets) if cfg.dump_contours else None
        return out_png, guide_png, dump, contour_sets
    except PipelineError:
        raise
    except (LesterError, ValueError) as e:
        raise PipelineError(frame_index, stage, str(e)) from e


def run_pipeline(cfg: PipelineConfig) -> RunSummary:
    """Run the full pipeline; see module docstring for the concurrency shape.

    Load/parse problems raise maskio's error types (validation failures);
    anything after loading raises PipelineError naming frame and stage.
    """
    started = time.perf_counter()
    manifest = parse_manifest(cfg.manifest_path.read_bytes())
    palette = parse_palette(cfg.palette_path.read_bytes())
    landmark_map = (
        load_landmarks(cfg.landmarks_path.read_bytes())
        if cfg.landmarks_path is not None
        else {}
    )
    seq = load_mask_sequence(cfg.masks_dir, manifest)
    seq = relabel_sequence(seq, cfg.iou_threshold)

    # Palette coverage precheck so no frame is written before a doomed run.
    for k, frame in enumerate(seq.frames):
        for label in (int(v) for v in np.unique(frame) if v != 0):
            if label not in manifest:
                raise PipelineError(k, "track", f"label {label} has no manifest entry")
            if label not in palette.colors:
                raise PipelineError(k, "render", f"no color for label {label}")

    effects = _resolve_effects(cfg.effects, palette)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)

    all_contour_sets = []
    frames_written = 0
    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        futures = [
            pool.submit(
                _process_frame,
                k,
                frame,
                manifest,
                palette,
                cfg,
                effects,
                landmark_map.get(k) if effects.features_enabled else None,
            )
            for k, frame in enumerate(seq.frames)
        ]
        try:
            for k, fut in enumerate(futures):
                out_png, guide_png, dump, contour_sets = fut.result()
                (cfg.out_dir / f"out_{k:04d}.png").write_bytes(out_png)
                if guide_png is not None:
                    (cfg.out_dir / f"guide_{k:04d}.png").write_bytes(guide_png)
                if dump is not None:
                    (cfg.out_dir / f"contours_{k:04d}.json").write_text(dump)
                all_contour_sets.append(contour_sets)
                frames_written += 1
        except BaseException:
            pool.shutdown(wait=False, cancel_futures=True)
            raise

    report_path = None
    if cfg.emit_report:
        report = build_report(seq, all_contour_sets)
        report_path = str(cfg.out_dir / "report.json")
        with open(report_path, "w") as f:
            json.dump(report.to_json_dict(), f, indent=2)
    return RunSummary(
        frames_written=frames_written,
        out_dir=str(cfg.out_dir),
        report_path=report_path,
        elapsed_seconds=time.perf_counter() - started,
    )


def validate_inputs(cfg: PipelineConfig) -> list[str]:
    """Dry-run checks; returns one diagnostic per problem, [] when ready."""
    diags: list[str] = []
    manifest: LabelTable | None = None
    palette = None
    try:
        manifest = parse_manifest(cfg.manifest_path.read_bytes())
    except (LesterError, OSError) as e:
        diags.append(f"manifest: {e}")
    try:
        palette = parse_palette(cfg.palette_path.read_bytes())
    except (LesterError, OSError) as e:
        diags.append(f"palette: {e}")
    if manifest is not None and palette is not None:
        for label_id in manifest.ids:
            if label_id not in palette.colors:
                diags.append(f"palette missing label {label_id}")
    seq = None
    try:
        seq = load_mask_sequence(cfg.masks_dir, manifest)
    except (LesterError, OSError) as e:
        diags.append(f"masks: {e}")
    if cfg.landmarks_path is not None:
        try:
            load_landmarks(cfg.landmarks_path.read_bytes())
        except (LesterError, OSError) as e:
            diags.append(f"landmarks: {e}")
    if seq is not None and cfg.effects.pixelate_factor > min(seq.size):
        diags.append(
            f"pixelate factor {cfg.effects.pixelate_factor} exceeds "
            f"min frame dimension {min(seq.size)}"
        )
    return diags
