"""Run manifests: where they go, how they are written and read back."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional

from pydantic import ValidationError

from fracwalk.errors import ManifestError
from fracwalk.log import get_logger
from fracwalk.schemas import RunManifest

logger = get_logger(__name__)

SUFFIX = ".manifest.json"


def manifest_path(manifest: RunManifest, output: Optional[Path], manifest_dir: Path) -> Path:
    """``<output>.manifest.json`` next to a file output, else a digest-named file in
    ``manifest_dir``."""
    if output is not None:
        return output.with_name(output.name + SUFFIX)
    data = manifest.outputs.get("data", "0" * 12)
    return manifest_dir / f"{manifest.subcommand}-{data[:12]}{SUFFIX}"


def write_manifest(manifest: RunManifest, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(manifest.model_dump_json(indent=2) + "\n", encoding="utf-8")
    logger.info("manifest written to %s", path)
    return path


def load_manifest(path: Path) -> RunManifest:
    """Read a manifest.

    Raises:
        ManifestError: if the file is missing, not JSON, or not a manifest
    """
    if not path.exists():
        raise ManifestError(f"Manifest not found: {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ManifestError(f"Invalid JSON in {path}: {e}")
    try:
        return RunManifest.model_validate(data)
    except ValidationError as e:
        raise ManifestError(f"{path} is not a run manifest: {e.error_count()} invalid fields")
