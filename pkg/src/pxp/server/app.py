"""HTTP service binding spec, agents and store together.

One process hosts one parameter spec, one store, and one live instance per
agent name. All mutations are serialized behind a session lock and land in
the store as a single atomic write, so killing and restarting the server
resumes the exact proposal stream.
"""

from __future__ import annotations

import base64
import binascii
import hashlib
import json
import logging
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from ..agents import AGENT_NAMES, AgentStateError, Feedback, create_agent, deserialize_agent
from ..param_space import ParamSpec
from ..store import NotFoundError, Store
from .schemas import (
    DrawingOut,
    FeedbackRequest,
    ManualDrawingRequest,
    OkResponse,
    PlayRequest,
    ProposalItem,
    TimeWarpRequest,
)

logger = logging.getLogger(__name__)


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


@dataclass
class SessionConfig:
    spec_path: str
    db_path: str = "data/db.json"
    images_dir: str = "data/images"
    listen: str = "127.0.0.1:8000"
    agent: str = "random"
    seed: int = 0
    agent_config: dict = field(default_factory=dict)


class Session:
    """Process-wide state: spec, store, and live agent instances."""

    def __init__(self, config: SessionConfig):
        spec_path = Path(config.spec_path)
        if not spec_path.exists():
            raise FileNotFoundError(
                f"parameter spec not found at {spec_path}; "
                "pass --spec or set PXP_SPEC to an existing spec JSON file"
            )
        with open(spec_path, "r", encoding="utf-8") as fh:
            self.spec_doc = json.load(fh)
        self.spec = ParamSpec.from_json_dict(self.spec_doc)
        self.config = config
        self.store = Store(config.db_path, config.images_dir)
        self.lock = threading.RLock()
        self.active_agent = config.agent
        self._agents: dict[str, object] = {}

    def agent_seed(self, name: str) -> int:
        digest = hashlib.sha256(f"{self.config.seed}:{name}".encode()).digest()
        return int.from_bytes(digest[:8], "big")

    def _fresh_agent(self, name: str):
        config = self.config.agent_config if name == self.config.agent else {}
        return create_agent(name, self.spec, config, seed=self.agent_seed(name))

    def get_agent(self, name: str):
        if name not in AGENT_NAMES:
            raise ApiError(
                404,
                "unknown_agent",
                f"unknown agent {name!r}; available agents: {', '.join(AGENT_NAMES)}",
            )
        if name not in self._agents:
            snapshot = self.store.load_agent_state(name)
            if snapshot is not None:
                self._agents[name] = deserialize_agent(snapshot, self.spec)
            else:
                self._agents[name] = self._fresh_agent(name)
        return self._agents[name]

    def reset_agent(self, name: str):
        if name not in AGENT_NAMES:
            raise ApiError(404, "unknown_agent", f"unknown agent {name!r}")
        self._agents[name] = self._fresh_agent(name)
        return self._agents[name]

    def persist_agent(self, name: str) -> None:
        self.store.save_agent_state(name, self._agents[name].serialize())


def _record_doc(rec) -> dict:
    return DrawingOut(
        id=rec.id,
        created_at=rec.created_at,
        params=rec.params,
        score=rec.score,
        agent=rec.agent,
        provenance=rec.provenance,
        image_path=rec.image_path,
    ).model_dump()


def create_app(config: SessionConfig) -> FastAPI:
    session = Session(config)
    app = FastAPI(title="pxp", version="0.1.0")
    app.state.session = session
    # the browser UI is served as static files from elsewhere
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.exception_handler(ApiError)
    def handle_api_error(request: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status,
            content={"error": {"code": exc.code, "message": exc.message}},
        )

    @app.exception_handler(RequestValidationError)
    def handle_validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422,
            content={"error": {"code": "validation_error", "message": str(exc.errors())}},
        )

    @app.exception_handler(NotFoundError)
    def handle_not_found(request: Request, exc: NotFoundError):
        return JSONResponse(
            status_code=404,
            content={"error": {"code": "not_found", "message": str(exc.args[0])}},
        )

    @app.exception_handler(AgentStateError)
    def handle_agent_state_error(request: Request, exc: AgentStateError):
        return JSONResponse(
            status_code=409,
            content={"error": {"code": "agent_state_error", "message": str(exc)}},
        )

    # ------------------------------------------------------------------

    @app.get("/api/spec")
    def get_spec() -> dict:
        return session.spec_doc

    @app.post("/api/agents/{name}/play")
    def play(name: str, body: PlayRequest) -> list[ProposalItem]:
        with session.lock:
            agent = session.get_agent(name)
            items = []
            with session.store.batch():
                for _ in range(body.count):
                    proposal = agent.play()
                    draw_id = session.store.insert_drawing(
                        params=proposal.params,
                        agent=name,
                        provenance=proposal.metadata,
                    )
                    items.append(
                        ProposalItem(
                            draw_id=draw_id,
                            params=proposal.params,
                            metadata=proposal.metadata,
                        )
                    )
                session.persist_agent(name)
            session.active_agent = name
            return items

    @app.post("/api/feedback")
    def feedback(body: FeedbackRequest) -> OkResponse:
        with session.lock:
            rec = session.store.get_drawing(body.draw_id)
            active = session.active_agent
            with session.store.batch():
                session.store.set_score(body.draw_id, body.score)
                if rec.agent == "manual":
                    agent = session.get_agent(active)
                    agent.update(Feedback(rec.params, body.score, {}))
                    session.persist_agent(active)
                elif rec.agent == active:
                    agent = session.get_agent(active)
                    agent.update(Feedback(rec.params, body.score, rec.provenance))
                    session.persist_agent(active)
                else:
                    logger.info(
                        "drawing %s belongs to agent %r; active agent is %r, "
                        "score stored without an update",
                        body.draw_id,
                        rec.agent,
                        active,
                    )
            return OkResponse()

    @app.post("/api/agents/{name}/time_warp")
    def time_warp(name: str, body: TimeWarpRequest) -> OkResponse:
        with session.lock:
            agent = session.get_agent(name)
            agent.time_warp(body.steps)
            session.persist_agent(name)
            return OkResponse()

    @app.post("/api/agents/{name}/reset")
    def reset(name: str) -> OkResponse:
        with session.lock:
            session.reset_agent(name)
            session.persist_agent(name)
            return OkResponse()

    @app.post("/api/drawings")
    def save_manual_drawing(body: ManualDrawingRequest) -> dict:
        violations = session.spec.validate(body.params)
        if violations:
            raise ApiError(400, "invalid_params", "; ".join(violations))
        image_bytes: Optional[bytes] = None
        if body.image_base64 is not None:
            try:
                image_bytes = base64.b64decode(body.image_base64, validate=True)
            except (binascii.Error, ValueError):
                raise ApiError(400, "invalid_image", "image_base64 is not valid base64")
        with session.lock, session.store.batch():
            draw_id = session.store.insert_drawing(
                params=body.params, score=body.score, agent="manual"
            )
            if image_bytes is not None:
                _write_image(session, draw_id, image_bytes)
            return {"draw_id": draw_id}

    @app.post("/api/drawings/{draw_id}/image")
    async def upload_image(draw_id: str, request: Request) -> OkResponse:
        data = await request.body()
        if not data:
            raise ApiError(400, "empty_body", "expected PNG bytes in the request body")
        with session.lock, session.store.batch():
            session.store.get_drawing(draw_id)
            _write_image(session, draw_id, data)
            return OkResponse()

    @app.get("/api/gallery")
    def gallery(
        score_min: Optional[float] = None,
        score_max: Optional[float] = None,
        agent: Optional[str] = None,
        unrated_only: bool = False,
        since: Optional[str] = None,
        until: Optional[str] = None,
        sort: str = "created_at",
        order: str = "desc",
        limit: Optional[int] = Query(default=None, ge=0),
        offset: int = Query(default=0, ge=0),
    ) -> list[dict]:
        if sort not in ("created_at", "score"):
            raise ApiError(422, "validation_error", f"unsupported sort key {sort!r}")
        if order not in ("asc", "desc"):
            raise ApiError(422, "validation_error", f"unsupported order {order!r}")
        rows = session.store.query(
            score_min=score_min,
            score_max=score_max,
            agent=agent,
            unrated_only=unrated_only,
            since=since,
            until=until,
            sort=sort,
            order=order,
            limit=limit,
            offset=offset,
        )
        return [_record_doc(rec) for rec in rows]

    @app.delete("/api/drawings/{draw_id}")
    def delete_drawing(draw_id: str) -> OkResponse:
        with session.lock:
            session.store.delete_drawing(draw_id)
            return OkResponse()

    return app


def _write_image(session: Session, draw_id: str, data: bytes) -> None:
    images_dir = Path(session.config.images_dir)
    images_dir.mkdir(parents=True, exist_ok=True)
    path = images_dir / f"{draw_id}.png"
    path.write_bytes(data)
    try:
        rel = path.relative_to(session.store.db_path.parent)
    except ValueError:
        rel = path
    session.store.set_image_path(draw_id, str(rel))
