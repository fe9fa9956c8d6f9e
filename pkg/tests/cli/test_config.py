"""Tests for CLI settings and the embedded run configuration."""

from pathlib import Path

import pytest


def test_settings_defaults(monkeypatch, tmp_path):
    from cli.config import CliSettings

    monkeypatch.chdir(tmp_path)
    for key in ("MS_LOG_LEVEL", "MS_DEFAULT_SEED", "MS_WORKERS"):
        monkeypatch.delenv(key, raising=False)
    settings = CliSettings()
    assert settings.log_level == "WARNING"
    assert settings.default_seed == 0
    assert settings.workers == 1


def test_settings_from_env(monkeypatch, tmp_path):
    from cli.config import CliSettings

    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("MS_WORKERS", "4")
    assert CliSettings().workers == 4


def test_run_config_embed():
    from cli.config import RunConfig

    cfg = RunConfig(subcommand="torus", params={"n": 5}, seed=1, out=Path("a.csv"), format="csv")
    assert cfg.embed() == {"subcommand": "torus", "params": {"n": 5}, "seed": 1, "out": "a.csv", "format": "csv"}


def test_run_config_rejects_unknown_subcommand():
    from pydantic import ValidationError

    from cli.config import RunConfig

    with pytest.raises(ValidationError):
        RunConfig(subcommand="sphere", seed=0, out=Path("a"), format="json")
