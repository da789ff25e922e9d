"""Persistent history of drawings and agent snapshots.

Everything lives in one JSON document (`db.json`) written via temp-file plus
atomic rename, so a completed write survives a process kill. Images are plain
PNG files next to it; records hold relative paths.
"""

from __future__ import annotations

import json
import os
import secrets
import threading
from contextlib import contextmanager
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional


class NotFoundError(KeyError):
    """Raised for operations on drawing ids that do not exist."""


class DuplicateIdError(ValueError):
    """Raised when inserting a drawing with an id that is already taken."""


def utc_now_millis() -> str:
    """RFC 3339 UTC timestamp with millisecond precision (string-sortable)."""
    now = datetime.now(timezone.utc)
    return now.strftime("%Y-%m-%dT%H:%M:%S.") + f"{now.microsecond // 1000:03d}Z"


def new_drawing_id() -> str:
    return secrets.token_hex(8)


@dataclass
class DrawingRecord:
    id: str
    created_at: str
    params: dict
    score: Optional[float] = None
    agent: str = "manual"
    provenance: dict = field(default_factory=dict)
    image_path: Optional[str] = None

    def to_doc(self) -> dict:
        doc = {
            "id": self.id,
            "created_at": self.created_at,
            "params": self.params,
            "agent": self.agent,
            "provenance": self.provenance,
        }
        if self.score is not None:
            doc["score"] = self.score
        if self.image_path is not None:
            doc["image_path"] = self.image_path
        return doc

    @classmethod
    def from_doc(cls, doc: dict) -> "DrawingRecord":
        return cls(
            id=doc["id"],
            created_at=doc["created_at"],
            params=doc["params"],
            score=doc.get("score"),
            agent=doc.get("agent", "manual"),
            provenance=doc.get("provenance", {}),
            image_path=doc.get("image_path"),
        )


class Store:
    """Single-writer, multi-reader drawing and agent-state store.

    Mutations run under one lock and flush the whole document atomically;
    `batch()` defers the flush so a multi-step request hits disk once.
    """

    def __init__(self, db_path: str | Path, images_dir: str | Path | None = None):
        self.db_path = Path(db_path)
        self.images_dir = (
            Path(images_dir) if images_dir is not None else self.db_path.parent / "images"
        )
        self._lock = threading.RLock()
        self._batch_depth = 0
        self._drawings: dict[str, DrawingRecord] = {}
        self._order: list[str] = []  # insertion order, for stable iteration
        self._agents: dict[str, dict] = {}
        self._load()

    def _load(self) -> None:
        if not self.db_path.exists():
            return
        with open(self.db_path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        for entry in doc.get("drawings", []):
            rec = DrawingRecord.from_doc(entry)
            self._drawings[rec.id] = rec
            self._order.append(rec.id)
        self._agents = doc.get("agents", {})

    def _flush(self) -> None:
        if self._batch_depth > 0:
            return
        doc = {
            "drawings": [self._drawings[i].to_doc() for i in self._order],
            "agents": self._agents,
        }
        self.db_path.parent.mkdir(parents=True, exist_ok=True)
        tmp = self.db_path.with_suffix(".json.tmp")
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(doc, fh)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, self.db_path)

    @contextmanager
    def batch(self):
        """Group several mutations into one atomic write."""
        with self._lock:
            self._batch_depth += 1
            try:
                yield self
            finally:
                self._batch_depth -= 1
            self._flush()

    # ------------------------------------------------------------------
    # drawings

    def insert_drawing(
        self,
        params: dict,
        score: Optional[float] = None,
        agent: str = "manual",
        provenance: Optional[dict] = None,
        image_path: Optional[str] = None,
        draw_id: Optional[str] = None,
        created_at: Optional[str] = None,
    ) -> str:
        if score is not None and score < 0:
            raise ValueError("score must be non-negative")
        with self._lock:
            if draw_id is None:
                draw_id = new_drawing_id()
                while draw_id in self._drawings:
                    draw_id = new_drawing_id()
            elif draw_id in self._drawings:
                raise DuplicateIdError(f"drawing id {draw_id!r} already exists")
            rec = DrawingRecord(
                id=draw_id,
                created_at=created_at or utc_now_millis(),
                params=params,
                score=score,
                agent=agent,
                provenance=dict(provenance or {}),
                image_path=image_path,
            )
            self._drawings[draw_id] = rec
            self._order.append(draw_id)
            self._flush()
            return draw_id

    def get_drawing(self, draw_id: str) -> DrawingRecord:
        with self._lock:
            try:
                return self._drawings[draw_id]
            except KeyError:
                raise NotFoundError(f"no drawing with id {draw_id!r}")

    def set_score(self, draw_id: str, score: float) -> None:
        if score < 0:
            raise ValueError("score must be non-negative")
        with self._lock:
            self.get_drawing(draw_id).score = float(score)
            self._flush()

    def set_image_path(self, draw_id: str, image_path: str) -> None:
        with self._lock:
            self.get_drawing(draw_id).image_path = image_path
            self._flush()

    def delete_drawing(self, draw_id: str) -> None:
        with self._lock:
            rec = self.get_drawing(draw_id)
            del self._drawings[draw_id]
            self._order.remove(draw_id)
            if rec.image_path:
                path = self.db_path.parent / rec.image_path
                if path.exists():
                    path.unlink()
            self._flush()

    def query(
        self,
        score_min: Optional[float] = None,
        score_max: Optional[float] = None,
        agent: Optional[str] = None,
        unrated_only: bool = False,
        since: Optional[str] = None,
        until: Optional[str] = None,
        sort: str = "created_at",
        order: str = "desc",
        limit: Optional[int] = None,
        offset: int = 0,
    ) -> list[DrawingRecord]:
        if sort not in ("created_at", "score"):
            raise ValueError(f"unsupported sort key {sort!r}")
        if order not in ("asc", "desc"):
            raise ValueError(f"unsupported order {order!r}")
        if limit is not None and limit < 0:
            raise ValueError("limit must be non-negative")
        if offset < 0:
            raise ValueError("offset must be non-negative")
        with self._lock:
            rows = [self._drawings[i] for i in self._order]
        if score_min is not None:
            rows = [r for r in rows if r.score is not None and r.score >= score_min]
        if score_max is not None:
            rows = [r for r in rows if r.score is not None and r.score <= score_max]
        if agent is not None:
            rows = [r for r in rows if r.agent == agent]
        if unrated_only:
            rows = [r for r in rows if r.score is None]
        if since is not None:
            rows = [r for r in rows if r.created_at >= since]
        if until is not None:
            rows = [r for r in rows if r.created_at <= until]
        if sort == "created_at":
            rows.sort(key=lambda r: (r.created_at, r.id))
        else:
            # Unscored records sort below every scored one.
            rows.sort(
                key=lambda r: (r.score is not None, r.score if r.score is not None else 0.0, r.id)
            )
        if order == "desc":
            rows.reverse()
        if offset:
            rows = rows[offset:]
        if limit is not None:
            rows = rows[:limit]
        return rows

    # ------------------------------------------------------------------
    # agent snapshots

    def save_agent_state(self, name: str, state: dict) -> None:
        with self._lock:
            self._agents[name] = {"state": state, "saved_at": utc_now_millis()}
            self._flush()

    def load_agent_state(self, name: str) -> Optional[dict]:
        with self._lock:
            snapshot = self._agents.get(name)
            return snapshot["state"] if snapshot else None

    def drop_agent_state(self, name: str) -> None:
        with self._lock:
            self._agents.pop(name, None)
            self._flush()

    def __len__(self) -> int:
        with self._lock:
            return len(self._order)
