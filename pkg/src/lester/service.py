"""HTTP service wrapping the pipeline.

POST /run executes a full batch render; POST /validate dry-runs the input
checks; GET /health is a liveness probe. Input validation problems come
back as 400s, failures during processing as 500s; the CLI maps those onto
its exit codes.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .contours import DEFAULT_MIN_AREA, DEFAULT_TOLERANCE, SimplifyParams
from .effects import DEFAULT_FEATURE_COLOR, DEFAULT_FEATURE_THICKNESS, EffectConfig
from .errors import LesterError, PipelineError
from .maskio import parse_hex_color
from .pipeline import PipelineConfig, run_pipeline, validate_inputs
from .tracker import DEFAULT_IOU_THRESHOLD

app = FastAPI(title="lester", description="Label masks to rotoscope-style frames")


class RunRequest(BaseModel):
    masks: str
    manifest: str
    palette: str
    out: str
    landmarks: str | None = None
    tolerance: float = DEFAULT_TOLERANCE
    min_area: float = DEFAULT_MIN_AREA
    iou_threshold: float = DEFAULT_IOU_THRESHOLD
    shadow: bool = False
    shadow_factor: float | None = None
    shadow_dx: int | None = None
    features: bool = False
    feature_color: str | None = None
    feature_thickness: int = DEFAULT_FEATURE_THICKNESS
    pixelate: int = 1
    guide: bool = False
    report: bool = False
    dump_contours: bool = False
    threads: int = 1


class ValidateRequest(RunRequest):
    out: str = ""


class RunResponse(BaseModel):
    frames_written: int
    out: str
    report: str | None = None
    elapsed_seconds: float


class ValidateResponse(BaseModel):
    ok: bool
    diagnostics: list[str]


def _to_config(req: RunRequest) -> PipelineConfig:
    return PipelineConfig(
        masks_dir=req.masks,
        manifest_path=req.manifest,
        palette_path=req.palette,
        out_dir=req.out or ".",
        landmarks_path=req.landmarks,
        simplify=SimplifyParams(alpha=req.min_area, t=req.tolerance),
        effects=EffectConfig(
            shadow_enabled=req.shadow,
            shadow_factor=req.shadow_factor,
            shadow_dx=req.shadow_dx,
            features_enabled=req.features,
            feature_color=(
                parse_hex_color(req.feature_color)
                if req.feature_color is not None
                else DEFAULT_FEATURE_COLOR
            ),
            feature_thickness=req.feature_thickness,
            pixelate_factor=req.pixelate,
        ),
        iou_threshold=req.iou_threshold,
        emit_guide=req.guide,
        emit_report=req.report,
        dump_contours=req.dump_contours,
        threads=req.threads,
    )


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/run", response_model=RunResponse)
def run(req: RunRequest) -> RunResponse:
    try:
        cfg = _to_config(req)
    except (ValueError, LesterError) as e:
        raise HTTPException(status_code=400, detail=str(e)) from e
    try:
        summary = run_pipeline(cfg)
    except PipelineError as e:
        raise HTTPException(status_code=500, detail=str(e)) from e
    except (LesterError, OSError, ValueError) as e:
        # Anything that failed before frame processing is an input problem.
        raise HTTPException(status_code=400, detail=str(e)) from e
    return RunResponse(
        frames_written=summary.frames_written,
        out=summary.out_dir,
        report=summary.report_path,
        elapsed_seconds=summary.elapsed_seconds,
    )


@app.post("/validate", response_model=ValidateResponse)
def validate(req: ValidateRequest) -> ValidateResponse:
    try:
        cfg = _to_config(req)
    except (ValueError, LesterError) as e:
        return ValidateResponse(ok=False, diagnostics=[str(e)])
    diags = validate_inputs(cfg)
    return ValidateResponse(ok=not diags, diagnostics=diags)
