"""Run manifests and validation check records."""

from __future__ import annotations

from datetime import datetime, timezone
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from fracwalk import __version__


class RunManifest(BaseModel):
    """Everything needed to re-run a subcommand and check its outputs."""

    subcommand: str
    params: Dict[str, Any] = Field(default_factory=dict)
    seed: Optional[int] = None
    stream_ids: List[int] = Field(default_factory=list)
    version: str = __version__
    created_at: datetime = Field(default_factory=lambda: datetime.now(timezone.utc))
    duration_seconds: float = Field(default=0.0, ge=0.0)
    outputs: Dict[str, str] = Field(default_factory=dict)  # name -> sha256
    config: Dict[str, Any] = Field(default_factory=dict)  # resolved numeric settings


class CheckResult(BaseModel):
    """Outcome of one named validation check."""

    name: str
    passed: bool
    detail: str = ""
    value: Optional[float] = None
    tolerance: Optional[float] = None
    error: bool = False  # the check raised instead of finishing
