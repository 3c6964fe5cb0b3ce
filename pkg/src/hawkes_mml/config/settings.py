"""Settings classes and the YAML configuration loader for hawkes-mml."""

import os
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml

from hawkes_mml.config.constants import (
    CONFIG_SCHEMA_VERSION,
    DEFAULT_CRITERION,
    DEFAULT_INGEST_HORIZON,
    DEFAULT_LATTICE_MODE,
    DEFAULT_MAX_EVENTS,
    DEFAULT_PRIOR_PRESET,
    DEFAULT_QUANTILE,
    DEFAULT_THRESHOLD,
    DEFAULT_WINDOW,
    ENV_CONFIG_DIR,
    EXPERIMENTS_DIRNAME,
    SETTINGS_FILENAME,
)
from hawkes_mml.core.bench import ExperimentSpec
from hawkes_mml.core.estimation import OptimizerConfig
from hawkes_mml.utils.errors import ConfigurationError, ExperimentNotFoundError, ValidationError
from hawkes_mml.utils.logging import get_logger

logger = get_logger("settings")


@dataclass
class IngestSettings:
    """Defaults of the shock-extraction rule."""

    window: int = DEFAULT_WINDOW
    quantile: float = DEFAULT_QUANTILE
    horizon: float = DEFAULT_INGEST_HORIZON

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "IngestSettings":
        return cls(
            window=int(data.get("window", DEFAULT_WINDOW)),
            quantile=float(data.get("quantile", DEFAULT_QUANTILE)),
            horizon=float(data.get("horizon", DEFAULT_INGEST_HORIZON)),
        )


@dataclass
class Settings:
    """Contents of config/hawkes.yaml with built-in defaults."""

    schema_version: int = CONFIG_SCHEMA_VERSION
    log_level: Optional[str] = None
    criterion: str = DEFAULT_CRITERION
    prior_preset: str = DEFAULT_PRIOR_PRESET
    lattice: str = DEFAULT_LATTICE_MODE
    max_parents: Optional[int] = None
    workers: Optional[int] = None
    threshold: float = DEFAULT_THRESHOLD
    max_events: int = DEFAULT_MAX_EVENTS
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    ingest: IngestSettings = field(default_factory=IngestSettings)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Settings":
        """Create Settings from a dictionary (parsed YAML)."""
        version = data.get("schema_version", CONFIG_SCHEMA_VERSION)
        if version != CONFIG_SCHEMA_VERSION:
            raise ConfigurationError(
                f"Unsupported config schema_version {version}; "
                f"this version reads schema_version {CONFIG_SCHEMA_VERSION}"
            )
        logging_section = data.get("logging", {})
        search = data.get("search", {})
        simulate = data.get("simulate", {})
        try:
            return cls(
                schema_version=version,
                log_level=logging_section.get("level"),
                criterion=search.get("criterion", DEFAULT_CRITERION),
                prior_preset=search.get("prior_preset", DEFAULT_PRIOR_PRESET),
                lattice=search.get("lattice", DEFAULT_LATTICE_MODE),
                max_parents=search.get("max_parents"),
                workers=search.get("workers"),
                threshold=float(search.get("threshold", DEFAULT_THRESHOLD)),
                max_events=int(simulate.get("max_events", DEFAULT_MAX_EVENTS)),
                optimizer=OptimizerConfig.from_dict(data.get("optimizer", {})),
                ingest=IngestSettings.from_dict(data.get("ingest", {})),
            )
        except ValidationError as e:
            raise ConfigurationError(f"Invalid configuration: {e}") from None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema_version": self.schema_version,
            "logging": {"level": self.log_level},
            "search": {
                "criterion": self.criterion,
                "prior_preset": self.prior_preset,
                "lattice": self.lattice,
                "max_parents": self.max_parents,
                "workers": self.workers,
                "threshold": self.threshold,
            },
            "simulate": {"max_events": self.max_events},
            "optimizer": self.optimizer.to_dict(),
            "ingest": asdict(self.ingest),
        }


class ConfigLoader:
    """Loader for settings and experiment presets from YAML files."""

    def __init__(self, config_dir: Optional[Path] = None):
        """
        Initialize the config loader.

        Args:
            config_dir: Path to config directory. If not provided, uses
                        HAWKES_MML_CONFIG_DIR env var or defaults to ./config
        """
        if config_dir:
            self.config_dir = Path(config_dir)
        elif os.environ.get(ENV_CONFIG_DIR):
            self.config_dir = Path(os.environ[ENV_CONFIG_DIR])
        else:
            self.config_dir = Path.cwd() / "config"

        self.experiments_dir = self.config_dir / EXPERIMENTS_DIRNAME
        self._settings: Optional[Settings] = None

    def _read_yaml(self, path: Path) -> Dict[str, Any]:
        try:
            with open(path) as f:
                data = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            raise ConfigurationError(f"Invalid YAML in {path}: {e}") from None
        if not isinstance(data, dict):
            raise ConfigurationError(f"{path} must contain a mapping at the top level")
        return data

    def load_settings(self) -> Settings:
        """
        Load config/hawkes.yaml, or built-in defaults when it does not exist.

        Raises:
            ConfigurationError: On invalid YAML or an unsupported schema version
        """
        if self._settings is not None:
            return self._settings
        path = self.config_dir / SETTINGS_FILENAME
        if path.exists():
            self._settings = Settings.from_dict(self._read_yaml(path))
            logger.debug(f"Loaded settings from {path}")
        else:
            logger.debug(f"No {path}; using built-in defaults")
            self._settings = Settings()
        return self._settings

    def discover_experiments(self) -> Dict[str, Path]:
        """Map experiment names to their YAML file paths."""
        experiments = {}
        if self.experiments_dir.exists():
            for yaml_file in sorted(self.experiments_dir.glob("*.yaml")):
                experiments[yaml_file.stem] = yaml_file
        return experiments

    def list_experiments(self) -> List[str]:
        return list(self.discover_experiments().keys())

    def load_experiment(self, name: str) -> ExperimentSpec:
        """
        Load an experiment preset by name, or from a path to a YAML file.

        Raises:
            ExperimentNotFoundError: If no preset has that name
            ConfigurationError: If the file is not a valid experiment spec
        """
        path = Path(name)
        if path.suffix in (".yaml", ".yml") and path.exists():
            name = path.stem
        else:
            experiments = self.discover_experiments()
            if name not in experiments:
                raise ExperimentNotFoundError(name, self.list_experiments())
            path = experiments[name]
        try:
            return ExperimentSpec.from_dict(self._read_yaml(path), name=name)
        except ValidationError as e:
            raise ConfigurationError(f"Invalid experiment {path}: {e}") from None
