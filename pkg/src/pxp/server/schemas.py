"""Request/response models for the HTTP API."""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field


class PlayRequest(BaseModel):
    count: int = Field(ge=1, le=256)


class ProposalItem(BaseModel):
    draw_id: str
    params: dict
    metadata: dict[str, str]


class FeedbackRequest(BaseModel):
    draw_id: str
    score: float = Field(ge=0)


class TimeWarpRequest(BaseModel):
    steps: int


class ManualDrawingRequest(BaseModel):
    params: dict
    score: Optional[float] = Field(default=None, ge=0)
    image_base64: Optional[str] = None


class DrawingOut(BaseModel):
    id: str
    created_at: str
    params: dict
    score: Optional[float] = None
    agent: str
    provenance: dict[str, str]
    image_path: Optional[str] = None


class OkResponse(BaseModel):
    ok: bool = True
