"""Command-line client for the render service.

`lester run` and `lester validate` post to the HTTP service; by default the
service app is invoked in-process through an ASGI transport (no server to
manage, same code path), and --server URL targets a running instance
instead. `lester serve` starts that instance. Exit codes: 0 success,
1 validation failure, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from pathlib import Path

import httpx

_PATH_KEYS = ("masks", "manifest", "palette", "landmarks", "out")
_PAYLOAD_KEYS = _PATH_KEYS + (
    "tolerance",
    "min_area",
    "iou_threshold",
    "shadow",
    "shadow_factor",
    "shadow_dx",
    "features",
    "feature_color",
    "feature_thickness",
    "pixelate",
    "guide",
    "report",
    "dump_contours",
    "threads",
)


def _add_io_args(p: argparse.ArgumentParser, with_out: bool) -> None:
    p.add_argument("--masks", help="directory of frame_NNNN.png label masks")
    p.add_argument("--manifest", help="manifest.json path")
    p.add_argument("--palette", help="palette.json path")
    p.add_argument("--landmarks", help="landmarks.json path")
    if with_out:
        p.add_argument("--out", help="output directory")
    p.add_argument("--tolerance", type=float, help="DP simplification tolerance, px")
    p.add_argument("--min-area", type=float, help="minimum contour area, px^2")
    p.add_argument("--iou-threshold", type=float, help="tracker match threshold")
    p.add_argument("--shadow", action="store_const", const=True, help="enable drop shadow")
    p.add_argument("--shadow-factor", type=float, help="shadow brightness multiplier 0..1")
    p.add_argument("--shadow-dx", type=int, help="shadow horizontal displacement, px")
    p.add_argument("--features", action="store_const", const=True, help="draw facial features")
    p.add_argument("--feature-color", help="feature stroke color, #RRGGBB[AA]")
    p.add_argument("--feature-thickness", type=int, help="feature stroke thickness, px")
    p.add_argument(
        "--pixelate",
        type=int,
        nargs="?",
        const=4,
        help="pixelation factor (bare flag means 4)",
    )
    p.add_argument("--guide", action="store_const", const=True, help="also write guide_NNNN.png")
    p.add_argument("--report", action="store_const", const=True, help="also write report.json")
    p.add_argument(
        "--dump-contours", action="store_const", const=True, help="also write contours_NNNN.json"
    )
    p.add_argument("--threads", type=int, help="worker threads (default 1)")
    p.add_argument("--config", help="JSON config file; explicit flags win")
    p.add_argument("--server", help="URL of a running service (default: in-process)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lester", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    _add_io_args(sub.add_parser("run", help="render a mask sequence"), with_out=True)
    _add_io_args(sub.add_parser("validate", help="dry-run input checks"), with_out=False)
    serve = sub.add_parser("serve", help="start the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8321)
    return parser


def _build_payload(args: argparse.Namespace) -> dict:
    payload: dict = {}
    if args.config:
        payload.update(json.loads(Path(args.config).read_text()))
    for key in _PAYLOAD_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            payload[key] = value
    for key in _PATH_KEYS:
        if payload.get(key):
            payload[key] = str(Path(payload[key]).expanduser().resolve())
    return payload


def _post(path: str, payload: dict, server: str | None):
    if server:
        with httpx.Client(base_url=server, timeout=600.0) as client:
            r = client.post(path, json=payload)
            return r.status_code, r.json()

    from .service import app

    async def go():
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(transport=transport, base_url="http://lester") as client:
            r = await client.post(path, json=payload)
            return r.status_code, r.json()

    return asyncio.run(go())


def _detail(body: dict) -> str:
    detail = body.get("detail", body)
    if isinstance(detail, str):
        return detail
    return json.dumps(detail)


def _cmd_run(args: argparse.Namespace) -> int:
    payload = _build_payload(args)
    missing = [k for k in ("masks", "manifest", "palette", "out") if not payload.get(k)]
    if missing:
        print(f"missing required option(s): {', '.join('--' + m for m in missing)}", file=sys.stderr)
        return 1
    status, body = _post("/run", payload, args.server)
    if status == 200:
        print(f"wrote {body['frames_written']} frames to {body['out']}")
        if body.get("report"):
            print(f"report: {body['report']}")
        return 0
    if status in (400, 422):
        print(f"validation error: {_detail(body)}", file=sys.stderr)
        return 1
    print(f"error: {_detail(body)}", file=sys.stderr)
    return 2


def _cmd_validate(args: argparse.Namespace) -> int:
    payload = _build_payload(args)
    missing = [k for k in ("masks", "manifest", "palette") if not payload.get(k)]
    if missing:
        print(f"missing required option(s): {', '.join('--' + m for m in missing)}", file=sys.stderr)
        return 1
    status, body = _post("/validate", payload, args.server)
    if status != 200:
        print(f"error: {_detail(body)}", file=sys.stderr)
        return 2
    for diag in body["diagnostics"]:
        print(diag)
    if body["ok"]:
        print("inputs ok")
        return 0
    return 1


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "validate":
            return _cmd_validate(args)
        return _cmd_serve(args)
    except httpx.HTTPError as e:
        print(f"error: cannot reach service: {e}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
