"""Tests for settings and experiment presets."""

import pytest

from hawkes_mml.config.constants import CONFIG_SCHEMA_VERSION, ENV_CONFIG_DIR
from hawkes_mml.config.settings import ConfigLoader, Settings
from hawkes_mml.utils.errors import ConfigurationError, ExperimentNotFoundError


# =============================================================================
# Shipped config
# =============================================================================


def test_shipped_settings_load(config_dir):
    settings = ConfigLoader(config_dir).load_settings()
    assert settings.schema_version == CONFIG_SCHEMA_VERSION
    assert settings.criterion == "mml-u"
    assert settings.optimizer.method == "nelder-mead"
    assert settings.optimizer.xatol == 1e-8
    assert settings.ingest.window == 252
    assert settings.max_events == 10_000_000


def test_shipped_experiments_parse(config_dir):
    loader = ConfigLoader(config_dir)
    names = loader.list_experiments()
    assert "table1-desk" in names
    for name in names:
        spec = loader.load_experiment(name)
        assert spec.name == name
        assert spec.seed == 2024


def test_table1_desk_preset(config_dir):
    spec = ConfigLoader(config_dir).load_experiment("table1-desk")
    assert (spec.setting, spec.p, spec.horizon, spec.trials) == ("cascade", 7, 200.0, 20)
    assert len(spec.methods) == 7


def test_sweep_preset_reads_float_exponent(config_dir):
    spec = ConfigLoader(config_dir).load_experiment("sweep-cascade")
    assert spec.sweep.high == 1e5
    assert spec.sweep.points == 11


# =============================================================================
# Loader behavior
# =============================================================================


def test_missing_settings_file_gives_defaults(tmp_path):
    assert ConfigLoader(tmp_path).load_settings() == Settings()


def test_config_dir_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv(ENV_CONFIG_DIR, str(tmp_path))
    assert ConfigLoader().config_dir == tmp_path


def test_schema_version_mismatch(tmp_path):
    (tmp_path / "hawkes.yaml").write_text("schema_version: 2\n")
    with pytest.raises(ConfigurationError, match="schema_version"):
        ConfigLoader(tmp_path).load_settings()


def test_invalid_yaml(tmp_path):
    (tmp_path / "hawkes.yaml").write_text("search: [unclosed\n")
    with pytest.raises(ConfigurationError, match="Invalid YAML"):
        ConfigLoader(tmp_path).load_settings()


def test_invalid_optimizer_setting(tmp_path):
    (tmp_path / "hawkes.yaml").write_text("optimizer:\n  method: newton\n")
    with pytest.raises(ConfigurationError, match="optimizer"):
        ConfigLoader(tmp_path).load_settings()


def test_unknown_experiment(config_dir):
    with pytest.raises(ExperimentNotFoundError) as excinfo:
        ConfigLoader(config_dir).load_experiment("table9")
    assert "table1-desk" in excinfo.value.available


def test_experiment_from_path(tmp_path):
    path = tmp_path / "mine.yaml"
    path.write_text("setting: single-input\np: 4\nhorizon: 50\n")
    spec = ConfigLoader(tmp_path).load_experiment(str(path))
    assert spec.name == "mine"
    assert spec.setting == "single-input"


def test_invalid_experiment(tmp_path):
    (tmp_path / "experiments").mkdir()
    (tmp_path / "experiments" / "bad.yaml").write_text("setting: ring\np: 3\nhorizon: 10\n")
    with pytest.raises(ConfigurationError, match="bad.yaml"):
        ConfigLoader(tmp_path).load_experiment("bad")


def test_settings_round_trip():
    settings = Settings(criterion="bic", max_parents=2, workers=4)
    assert Settings.from_dict(settings.to_dict()) == settings
