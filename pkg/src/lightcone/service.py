"""FastAPI service exposing the analysis commands.

Every endpoint takes a RunConfig and returns the rendered artifact texts,
so clients only write bytes to disk; all float formatting happens here,
which keeps outputs byte-identical regardless of the client.
"""

from __future__ import annotations

from typing import Dict, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .commands import COMMANDS, execute
from .config import RunConfig
from .errors import ConfigError, LightconeError


class RunRequest(BaseModel):
    config: RunConfig


class RunResponse(BaseModel):
    command: str
    exit_code: int
    verdict: Optional[str] = None
    reason: Optional[str] = None
    artifacts: Dict[str, str]


def create_app() -> FastAPI:
    app = FastAPI(title="lightcone",
                  description="Light-like point analysis of zero mean "
                              "curvature hypersurface graphs")

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    def make_endpoint(command: str):
        def endpoint(req: RunRequest) -> RunResponse:
            try:
                result = execute(command, req.config)
            except ConfigError as err:
                raise HTTPException(status_code=400, detail=str(err))
            except LightconeError as err:
                raise HTTPException(
                    status_code=400,
                    detail=f"{type(err).__name__}: {err}")
            return RunResponse(command=result.command,
                               exit_code=result.exit_code,
                               verdict=result.verdict,
                               reason=result.reason,
                               artifacts=result.artifacts)
        endpoint.__name__ = f"run_{command}"
        return endpoint

    for command in COMMANDS:
        app.post(f"/v1/{command}", response_model=RunResponse,
                 name=command)(make_endpoint(command))
    return app


app = create_app()
