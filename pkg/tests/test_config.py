from pathlib import Path

import pytest
from pydantic import ValidationError

from fracwalk.config import Config, get_config, load_config_file
from fracwalk.errors import ConfigError


def test_defaults_come_from_environment(monkeypatch):
    monkeypatch.setenv("FRACWALK_SEED", "42")
    monkeypatch.setenv("FRACWALK_THREADS", "3")
    config = get_config()
    assert config.seed == 42
    assert config.threads == 3
    assert config.talbot_nodes == 48


def test_file_overrides_environment_and_flags_override_file(tmp_path: Path, monkeypatch):
    monkeypatch.setenv("FRACWALK_SEED", "1")
    path = tmp_path / "fracwalk.conf"
    path.write_text("# local settings\n\nseed = 7\nseries-radius=3.5\n", encoding="utf-8")

    config = get_config(path)
    assert config.seed == 7
    assert config.series_radius == 3.5

    config = get_config(path, seed=9, threads=None)
    assert config.seed == 9
    assert config.threads == 1


def test_unknown_key_is_rejected(tmp_path: Path):
    path = tmp_path / "bad.conf"
    path.write_text("seeed=3\n", encoding="utf-8")
    with pytest.raises(ConfigError, match="unknown key"):
        load_config_file(path)


def test_line_without_equals_is_rejected(tmp_path: Path):
    path = tmp_path / "bad.conf"
    path.write_text("seed 3\n", encoding="utf-8")
    with pytest.raises(ConfigError, match="expected key=value"):
        load_config_file(path)


def test_missing_file():
    with pytest.raises(ConfigError, match="not found"):
        get_config(Path("/nonexistent/fracwalk.conf"))


def test_invalid_values_fail_validation():
    with pytest.raises(ValidationError):
        Config(threads=0)
    with pytest.raises(ValidationError):
        Config(extended_digits=5)
