"""Deployment-tunable budgets and limits."""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Optional


@dataclass(frozen=True)
class Budgets:
    synth_time_ms: int = 5000        # wall clock per synthesis run
    synth_max_candidates: int = 50000
    max_hole_nodes: int = 12         # filling size cap per hole
    eval_fuel: int = 100_000         # per top-level evaluation
    check_fuel: int = 30_000         # per candidate check during search
    verify_fuel: int = 200_000
    check_subset: int = 40           # examples re-checked per candidate
    recovery_time_ms: int = 5000     # wall clock for the whole recovery loop
    hole_spec_examples: int = 5

    def capped_by(self, maxima: "Budgets") -> "Budgets":
        """Clamp request-level overrides to server maxima."""
        out = {}
        for f in fields(self):
            out[f.name] = min(getattr(self, f.name), getattr(maxima, f.name))
        return Budgets(**out)


@dataclass(frozen=True)
class ServiceConfig:
    exercises_dir: Optional[str] = None
    port: int = 8000
    host: str = "127.0.0.1"
    budgets: Budgets = field(default_factory=Budgets)
    session_log: Optional[str] = None  # JSONL path; None disables logging
    max_concurrent_synthesis: int = os.cpu_count() or 4


ENV_EXERCISES = "TUTOR_EXERCISES"
ENV_PORT = "TUTOR_PORT"
ENV_BUDGET_MS = "TUTOR_BUDGET_MS"
ENV_SESSION_LOG = "TUTOR_SESSION_LOG"


def load_config(path: Optional[str] = None, env: Optional[dict[str, str]] = None) -> ServiceConfig:
    """Config file first, then environment overrides."""
    env = os.environ if env is None else env
    data: dict = {}
    if path:
        data = json.loads(Path(path).read_text())
    budgets = Budgets(**data.get("budgets", {}))
    cfg = ServiceConfig(
        exercises_dir=data.get("exercises_dir"),
        port=int(data.get("port", 8000)),
        host=data.get("host", "127.0.0.1"),
        budgets=budgets,
        session_log=data.get("session_log"),
        max_concurrent_synthesis=int(data.get("max_concurrent_synthesis", os.cpu_count() or 4)),
    )
    if env.get(ENV_EXERCISES):
        cfg = replace(cfg, exercises_dir=env[ENV_EXERCISES])
    if env.get(ENV_PORT):
        cfg = replace(cfg, port=int(env[ENV_PORT]))
    if env.get(ENV_SESSION_LOG):
        cfg = replace(cfg, session_log=env[ENV_SESSION_LOG])
    if env.get(ENV_BUDGET_MS):
        ms = int(env[ENV_BUDGET_MS])
        cfg = replace(cfg, budgets=replace(cfg.budgets, synth_time_ms=ms, recovery_time_ms=ms))
    return cfg
