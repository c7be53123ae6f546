"""Configuration management for fracwalk."""

from __future__ import annotations

import os
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field

from fracwalk.errors import ConfigError

load_dotenv()


def _env(name: str, default: str) -> str:
    return os.getenv(f"FRACWALK_{name}", default)


class Config(BaseModel):
    """Runtime configuration loaded from environment variables.

    Defaults are read when the model is built, so a changed environment is picked up
    by the next ``get_config()`` call.
    """

    log_level: str = Field(default_factory=lambda: _env("LOG_LEVEL", "WARNING"))
    threads: int = Field(
        default_factory=lambda: int(_env("THREADS", str(os.cpu_count() or 1))), ge=1
    )
    seed: int = Field(default_factory=lambda: int(_env("SEED", "0")), ge=0)
    manifest_dir: Path = Field(default_factory=lambda: Path(_env("MANIFEST_DIR", "runs")))

    # Simulation budget
    max_events: int = Field(default_factory=lambda: int(_env("MAX_EVENTS", "10000000")), ge=1)

    # Mittag-Leffler evaluation
    z_max_real: float = Field(default=700.0, gt=0)
    z_max_complex: float = Field(default=50.0, gt=0)
    series_radius: float = Field(default=5.0, gt=0)
    asymptotic_threshold: float = Field(default=1e5, gt=0)
    extended_digits: int = Field(default=50, ge=20)

    # Laplace inversion
    talbot_nodes: int = Field(default=48, ge=8)


def load_config_file(path: Path) -> Dict[str, str]:
    """Parse a ``key=value`` configuration file.

    Blank lines and lines starting with ``#`` are skipped. Keys may use dashes or
    underscores. Unknown keys are rejected.
    """
    if not path.exists():
        raise ConfigError(f"Config file not found: {path}")

    values: Dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as f:
        for line_num, raw in enumerate(f, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{line_num}: expected key=value, got {line!r}")
            key, value = line.split("=", 1)
            key = key.strip().replace("-", "_")
            if key not in Config.model_fields:
                raise ConfigError(f"{path}:{line_num}: unknown key {key!r}")
            values[key] = value.strip()
    return values


def get_config(config_file: Optional[Path] = None, **overrides: Any) -> Config:
    """Get the configuration.

    Precedence, lowest first: environment, config file, explicit overrides. Overrides
    set to ``None`` are ignored so unset CLI flags fall through.
    """
    values: Dict[str, Any] = {}
    if config_file is not None:
        values.update(load_config_file(config_file))
    values.update({k: v for k, v in overrides.items() if v is not None})
    return Config(**values)


def write_config_file(values: Dict[str, Any], path: Path) -> None:
    """Write ``values`` as a ``key=value`` file readable by :func:`load_config_file`."""
    lines = [f"{key}={value}" for key, value in values.items()]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
