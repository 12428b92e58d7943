"""HTTP API over the session layer plus read-only table/sweep data.

The UI consumes only these endpoints; every payoff number on the wire
is computed server side.  Static frontend assets are served under /ui
when a build is present.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Optional, Union

from fastapi import FastAPI, HTTPException
from fastapi.responses import RedirectResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from . import formats, oracle
from .circuit import EARLY_COLLAPSE, FAITHFUL
from .oracle import GameParams, StrategyOp
from .sessions import PhaseError, SessionStore, UnknownSessionError

Angle = Union[float, str]


class CreateSessionRequest(BaseModel):
    gamma: Angle = 0.0
    theta: Angle = 0.0
    seed: Optional[int] = None
    mode: str = Field(default=FAITHFUL, pattern=f"^({FAITHFUL}|{EARLY_COLLAPSE})$")


class ParamsRequest(BaseModel):
    gamma: Angle
    theta: Angle


class ActRequest(BaseModel):
    strategy: str


def _angle(value: Angle, name: str) -> float:
    try:
        parsed = formats.parse_angle(value)
        GameParams(parsed, 0.0)
        return parsed
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=f"{name}: {exc}") from None


def create_app(store: Optional[SessionStore] = None) -> FastAPI:
    app = FastAPI(title="snackjack", version="0.1.0")
    sessions = store if store is not None else SessionStore()

    def _get(session_id: str):
        try:
            return sessions.get(session_id)
        except UnknownSessionError:
            raise HTTPException(status_code=404, detail="unknown session") from None

    @app.exception_handler(PhaseError)
    async def _phase_error(request, exc: PhaseError):
        from fastapi.responses import JSONResponse

        return JSONResponse(status_code=409, content={"detail": str(exc)})

    @app.post("/api/sessions", status_code=201)
    def create_session(req: CreateSessionRequest) -> dict:
        session = sessions.create(
            gamma=_angle(req.gamma, "gamma"),
            theta=_angle(req.theta, "theta"),
            seed=req.seed,
            mode=req.mode,
        )
        return session.view()

    @app.get("/api/sessions/{session_id}")
    def get_session(session_id: str) -> dict:
        return _get(session_id).view()

    @app.patch("/api/sessions/{session_id}/params")
    def set_params(session_id: str, req: ParamsRequest) -> dict:
        session = _get(session_id)
        sessions.set_params(
            session, _angle(req.gamma, "gamma"), _angle(req.theta, "theta")
        )
        return session.view()

    @app.post("/api/sessions/{session_id}/deal")
    def deal(session_id: str) -> dict:
        return sessions.deal(_get(session_id))

    @app.get("/api/sessions/{session_id}/strategies")
    def strategies(session_id: str) -> dict:
        return sessions.strategies(_get(session_id))

    @app.post("/api/sessions/{session_id}/act")
    def act(session_id: str, req: ActRequest) -> dict:
        session = _get(session_id)
        try:
            op = StrategyOp(req.strategy)
        except ValueError:
            raise HTTPException(
                status_code=422,
                detail=f"strategy must be one of I, X, Y, Z; got {req.strategy!r}",
            ) from None
        return sessions.act(session, op)

    @app.get("/api/sessions/{session_id}/history")
    def history(session_id: str) -> list[dict]:
        return sessions.history(_get(session_id))

    @app.get("/api/tables")
    def tables(
        gamma: Optional[str] = None,
        theta: Optional[str] = None,
        classical: bool = False,
    ) -> dict:
        if classical:
            return formats.table_json(None)
        g = _angle(gamma if gamma is not None else math.pi / 2, "gamma")
        t = _angle(theta if theta is not None else math.pi / 2, "theta")
        return formats.table_json(GameParams(g, t))

    @app.get("/api/sweep")
    def sweep(resolution: int = 33) -> dict:
        if not 2 <= resolution <= 129:
            raise HTTPException(
                status_code=422, detail="resolution must be in [2, 129]"
            )
        gammas = [i * (math.pi / 2) / (resolution - 1) for i in range(resolution)]
        grid = oracle.sweep(gammas, gammas)
        return {"gammas": gammas, "thetas": gammas, "values": grid}

    dist = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    if dist.is_dir():
        app.mount("/ui", StaticFiles(directory=str(dist), html=True), name="ui")

        @app.get("/", include_in_schema=False)
        def index() -> RedirectResponse:
            return RedirectResponse(url="/ui/")

    return app
