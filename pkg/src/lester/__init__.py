"""lester: label-mask sequences to retro rotoscope animation frames."""

from .contours import (
    Contour,
    SimplifyParams,
    SubMask,
    can_simplify,
    contour_area,
    dilate,
    simplify_all,
    simplify_dp,
    split_submasks,
    trace_contours,
)
from .effects import EffectConfig, apply_effects, apply_shadow, draw_facial_features, pixelate
from .maskio import (
    FrameSequence,
    LabelTable,
    LandmarkSet,
    Palette,
    load_landmarks,
    load_mask_sequence,
    parse_hex_color,
    parse_manifest,
    parse_palette,
    read_frame_png,
    write_frame_png,
    write_mask_sequence,
)
from .metrics import ConsistencyReport, build_report, label_flip_count, mean_vertex_count
from .pipeline import PipelineConfig, RunSummary, run_pipeline, validate_inputs
from .render import RenderPlan, fill_layer, region_mask, render_frame, render_id_guide
from .tracker import LabelMapping, iou, match_labels, relabel_sequence

__version__ = "0.1.0"
