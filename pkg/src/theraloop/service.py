"""Session HTTP service.

In-memory sessions keyed by id, mutated only through step/decide; per-session
operations are serialized with a lock, and the catalog/table are shared
read-only. Interactive stepping is split into propose (POST step) and commit
(POST decide) so no action can execute without an explicit human decision.

All payloads are JSON. Errors come back as
``{"error": {"code": ..., "message": ...}}`` with not-found, conflict, or
bad-request status codes.
"""

from __future__ import annotations

import threading
import uuid
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles

from .behaviors import BehaviorCatalog
from .child import InstantiationTable, default_catalog, default_table
from .engine import (
    GateChoice,
    GateDecision,
    GateMode,
    Session,
    config_from_dict,
    create_session,
    step_to_dict,
    trace_lines,
)
from .errors import ConfigError, SessionStateError, TheraloopError


class _SessionBox:
    def __init__(self, session: Session):
        self.session = session
        self.lock = threading.Lock()


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(
        status_code=status, content={"error": {"code": code, "message": message}}
    )


def create_app(
    catalog: BehaviorCatalog | None = None,
    table: InstantiationTable | None = None,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    catalog = catalog or default_catalog()
    table = table or default_table()
    app = FastAPI(title="theraloop session service")
    sessions: dict[str, _SessionBox] = {}

    @app.exception_handler(SessionStateError)
    async def _conflict(request: Request, exc: SessionStateError):
        return _error(409, "conflict", str(exc))

    @app.exception_handler(TheraloopError)
    async def _bad_request(request: Request, exc: TheraloopError):
        return _error(400, "bad_request", str(exc))

    @app.exception_handler(ValueError)
    async def _bad_value(request: Request, exc: ValueError):
        return _error(400, "bad_request", str(exc))

    def _box(session_id: str) -> _SessionBox:
        box = sessions.get(session_id)
        if box is None:
            raise LookupError(session_id)
        return box

    @app.exception_handler(LookupError)
    async def _not_found(request: Request, exc: LookupError):
        return _error(404, "not_found", f"unknown session id {exc.args[0]!r}")

    @app.get("/api/catalog")
    def get_catalog():
        return {
            "activities": [
                {"id": a.id, "name": a.name, "features": list(a.feature_ids)}
                for a in catalog.activities.values()
            ],
            "features": [
                {
                    "id": f.id,
                    "name": f.name,
                    "max_value": f.max_value,
                    "motor": f.motor,
                }
                for f in catalog.features.values()
            ],
            "behaviors": [
                {
                    "id": b.id,
                    "feature": b.feature_id,
                    "value": b.feature_value,
                    "description": b.description,
                }
                for b in catalog.behaviors.values()
            ],
            "profile_categories": table.categories,
        }

    @app.get("/api/activities")
    def get_activities():
        return [
            {"id": a.id, "name": a.name, "features": list(a.feature_ids)}
            for a in catalog.activities.values()
        ]

    @app.post("/api/sessions", status_code=201)
    async def post_session(request: Request):
        body = await request.json()
        config = config_from_dict(body)
        session = create_session(config, catalog=catalog, table=table)
        session_id = uuid.uuid4().hex
        sessions[session_id] = _SessionBox(session)
        with sessions[session_id].lock:
            return {"id": session_id, "snapshot": session.snapshot()}

    @app.get("/api/sessions/{session_id}")
    def get_snapshot(session_id: str):
        box = _box(session_id)
        with box.lock:
            return {"id": session_id, "snapshot": box.session.snapshot()}

    @app.post("/api/sessions/{session_id}/step")
    def post_step(session_id: str):
        box = _box(session_id)
        with box.lock:
            if box.session.config.gate is GateMode.INTERACTIVE:
                proposal = box.session.propose()
                return {"status": "pending", "proposal": proposal}
            step = box.session.step()
            return {"status": "committed", "step": step_to_dict(step)}

    @app.post("/api/sessions/{session_id}/decide")
    async def post_decide(session_id: str, request: Request):
        body = await request.json()
        choice = body.get("decision")
        box = _box(session_id)
        with box.lock:
            if choice == "approve":
                decision = GateDecision(GateChoice.APPROVED)
            elif choice == "halt":
                decision = GateDecision(GateChoice.HALTED)
            elif choice == "override":
                level = body.get("level")
                if level is None:
                    raise ConfigError("override decisions require a 'level' field")
                action = _ladder_action(box.session, int(level))
                decision = GateDecision(GateChoice.OVERRIDDEN, action)
            else:
                raise ConfigError(
                    f"decision must be approve, override, or halt; got {choice!r}"
                )
            step = box.session.decide(decision)
            return {"status": "committed", "step": step_to_dict(step)}

    def _ladder_action(session: Session, level: int):
        for action in session.current_task.actions():
            if action.level.level == level:
                return action
        raise ConfigError(f"no ladder action at level {level} for the current task")

    @app.get("/api/sessions/{session_id}/trace")
    def get_trace(session_id: str):
        box = _box(session_id)
        with box.lock:
            text = "\n".join(trace_lines(box.session.trace)) + "\n"
        return PlainTextResponse(text, media_type="application/x-ndjson")

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
