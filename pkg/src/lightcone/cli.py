"""Command-line front end.

The CLI is a thin client of the service: it loads a config file, applies
flag overrides, posts the request (in-process by default, or to a remote
server via --server), and writes the returned artifacts to --out.

Exit codes: 0 success/PASS, 1 usage or config error, 2 FAIL, 3
INAPPLICABLE.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import httpx
from pydantic import ValidationError

from .commands import COMMANDS

USAGE_ERROR = 1


def _load_config(path: str) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise SystemExit(f"error: cannot read config {path}: {err}")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise SystemExit(
            f"error: {path}: line {err.lineno}, column {err.colno}: {err.msg}")
    if not isinstance(data, dict):
        raise SystemExit(f"error: {path}: config must be a JSON object")
    return data


def _apply_overrides(data: dict, args: argparse.Namespace) -> dict:
    tol = dict(data.get("tolerances") or {})
    if args.tol_b is not None:
        tol["tol_b"] = args.tol_b
    if args.tol_grad is not None:
        tol["tol_grad"] = args.tol_grad
    if tol:
        data["tolerances"] = tol
    if args.steps is not None:
        data["steps"] = args.steps
    if args.seed is not None:
        data["seed"] = args.seed
    return data


def _client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=300.0)
    from fastapi.testclient import TestClient

    from .service import app
    return TestClient(app)


def _run_command(args: argparse.Namespace) -> int:
    data = _apply_overrides(_load_config(args.config), args)
    # validate locally first for crisp messages before any network hop
    if not args.server:
        from .config import RunConfig
        try:
            RunConfig.model_validate(data)
        except ValidationError as err:
            print(f"error: invalid config: {err}", file=sys.stderr)
            return USAGE_ERROR
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    with _client(args.server) as client:
        resp = client.post(f"/v1/{args.command}", json={"config": data})
    if resp.status_code != 200:
        try:
            detail = resp.json().get("detail", resp.text)
        except ValueError:
            detail = resp.text
        print(f"error: {detail}", file=sys.stderr)
        return USAGE_ERROR
    body = resp.json()
    for name, content in sorted(body["artifacts"].items()):
        (out_dir / name).write_text(content, encoding="utf-8", newline="")
        print(f"wrote {out_dir / name}")
    if body.get("verdict"):
        print(f"verdict: {body['verdict']} ({body.get('reason', '')})")
    return int(body["exit_code"])


def _run_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import app
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lightcone",
        description="Analyze light-like points of zero mean curvature "
                    "hypersurface graphs in Lorentzian manifolds.")
    sub = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        p = sub.add_parser(command, help=f"run the {command} analysis")
        p.add_argument("--config", required=True, help="JSON run config")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--tol-b", type=float, default=None,
                       help="override the |B| tolerance")
        p.add_argument("--tol-grad", type=float, default=None,
                       help="override the |grad B| tolerance")
        p.add_argument("--steps", type=int, default=None,
                       help="override the integrator step count")
        p.add_argument("--seed", type=int, default=None,
                       help="override the Lipschitz sampling seed")
        p.add_argument("--server", default=None,
                       help="URL of a running lightcone service "
                            "(default: run in process)")
        p.set_defaults(func=_run_command)
    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.set_defaults(func=_run_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
