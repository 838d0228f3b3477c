"""HTTP service around the feedback engine.

Exercises load and validate once at startup (an invalid document aborts
startup, naming the file). Feedback computation is CPU-bound and pure,
so requests run on worker threads with a semaphore capping concurrent
synthesis. Every feedback request appends one line to the session log.
"""
from __future__ import annotations

import hashlib
import json
import threading
import time
from dataclasses import replace
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware

from .config import ServiceConfig
from .engine import give_feedback
from .exercises import ExerciseStore
from .wire import (
    ExerciseDetail, ExerciseInfo, FeedbackRequest, FeedbackResponse,
    exercise_detail, exercise_info, to_response,
)


class SessionLog:
    """Append-only JSONL log, one record per feedback request."""

    def __init__(self, path: Optional[str]):
        self.path = path
        self._lock = threading.Lock()

    def append(self, record: dict) -> None:
        if self.path is None:
            return
        line = json.dumps(record, separators=(",", ":"), sort_keys=True)
        with self._lock:
            with open(self.path, "a", encoding="utf-8") as f:
                f.write(line + "\n")


def create_app(config: Optional[ServiceConfig] = None,
               store: Optional[ExerciseStore] = None) -> FastAPI:
    config = config or ServiceConfig()
    if store is None:
        store = ExerciseStore.load(config.exercises_dir)

    app = FastAPI(title="minitutor", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"],
    )
    log = SessionLog(config.session_log)
    synth_slots = threading.Semaphore(config.max_concurrent_synthesis)
    app.state.store = store
    app.state.config = config
    app.state.session_log = log

    @app.get("/api/health")
    def health() -> dict:
        return {"status": "ok", "exercises": len(store.ids())}

    @app.get("/api/exercises", response_model=list[ExerciseInfo])
    def list_exercises() -> list[ExerciseInfo]:
        return [exercise_info(store.get(ex_id)) for ex_id in store.ids()]

    @app.get("/api/exercises/{ex_id}", response_model=ExerciseDetail)
    def get_exercise(ex_id: str) -> ExerciseDetail:
        ex = store.get(ex_id)
        if ex is None:
            raise HTTPException(status_code=404, detail=f"no exercise {ex_id!r}")
        return exercise_detail(ex)

    @app.post("/api/exercises/{ex_id}/feedback", response_model=FeedbackResponse)
    def feedback(ex_id: str, request: FeedbackRequest) -> FeedbackResponse:
        ex = store.get(ex_id)
        if ex is None:
            raise HTTPException(status_code=404, detail=f"no exercise {ex_id!r}")
        budgets = config.budgets
        if request.budget_ms is not None:
            ms = min(request.budget_ms, config.budgets.synth_time_ms)
            budgets = replace(budgets, synth_time_ms=ms, recovery_time_ms=ms)
        t0 = time.monotonic()
        with synth_slots:
            fb = give_feedback(ex, request.source, budgets)
        response = to_response(ex, fb)
        digest_src = response.model_dump_json(exclude={"diagnostics"})
        log.append({
            "ts": time.time(),
            "exercise_id": ex_id,
            "source": request.source,
            "classification": response.classification,
            "evidence_digest": hashlib.sha256(digest_src.encode()).hexdigest(),
            "latency_ms": int((time.monotonic() - t0) * 1000),
        })
        return response

    return app
