"""Configuration manager for scaffold-gms."""

import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv

from .errors import DomainError

logger = logging.getLogger(__name__)

OUTPUT_FORMATS = ("json", "csv", "table")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class ConfigManager:
    """Layered settings: defaults, then the JSON file, then the environment."""

    DEFAULTS: Dict[str, Any] = {
        "term_limit": 1_000_000,
        "max_order": 625,
        "bfunction_limit": 3125,
        "jobs": 1,
        "output_format": "table",
        "log_level": "WARNING",
        "log_file": None,
    }

    ENV_VARS = {
        "term_limit": "SCAFFOLD_TERM_LIMIT",
        "max_order": "SCAFFOLD_MAX_ORDER",
        "bfunction_limit": "SCAFFOLD_BFUNCTION_LIMIT",
        "jobs": "SCAFFOLD_JOBS",
        "output_format": "SCAFFOLD_FORMAT",
        "log_level": "LOG_LEVEL",
        "log_file": "LOG_FILE",
    }

    INTEGER_KEYS = ("term_limit", "max_order", "bfunction_limit", "jobs")
    CHOICES = {
        "output_format": OUTPUT_FORMATS,
        "log_level": LOG_LEVELS,
    }

    def __init__(self, config_file: Optional[Path] = None):
        """Initialize the configuration manager."""
        load_dotenv()
        self.config_dir = Path.home() / ".scaffold_gms"
        env_file = os.getenv("SCAFFOLD_CONFIG")
        if config_file is not None:
            self.config_file = Path(config_file)
        elif env_file:
            self.config_file = Path(env_file)
        else:
            self.config_file = self.config_dir / "config.json"
        self.file_config = self._read_file()
        self.config = self._load_config()

    def _load_config(self) -> Dict[str, Any]:
        config = dict(self.DEFAULTS)
        config.update(self.file_config)
        for key, var in self.ENV_VARS.items():
            value = os.getenv(var)
            if value is not None and value != "":
                config[key] = value
        for key in self.INTEGER_KEYS:
            config[key] = self._as_int(key, config[key])
        for key in self.CHOICES:
            config[key] = self._as_choice(key, config[key])
        return config

    def _read_file(self) -> Dict[str, Any]:
        if not self.config_file.exists():
            return {}
        try:
            data = json.loads(self.config_file.read_text())
        except (OSError, json.JSONDecodeError) as e:
            logger.warning("ignoring unreadable config file %s: %s", self.config_file, e)
            return {}
        if not isinstance(data, dict):
            logger.warning("ignoring config file %s: top level is not an object", self.config_file)
            return {}
        return {key: value for key, value in data.items() if key in self.DEFAULTS}

    @staticmethod
    def _as_int(key: str, value: Any) -> int:
        try:
            number = int(value)
        except (TypeError, ValueError):
            raise DomainError(f"setting {key} must be an integer, got {value!r}") from None
        if number < 1:
            raise DomainError(f"setting {key} must be positive, got {number}")
        return number

    @classmethod
    def _as_choice(cls, key: str, value: Any) -> str:
        choice = str(value).lower() if key == "output_format" else str(value).upper()
        if choice not in cls.CHOICES[key]:
            raise DomainError(f"setting {key} must be one of {', '.join(cls.CHOICES[key])}, got {value!r}")
        return choice

    def _save_config(self) -> None:
        self.config_file.parent.mkdir(parents=True, exist_ok=True)
        self.config_file.write_text(json.dumps(self.file_config, indent=2))

    def get(self, key: str, default: Any = None) -> Any:
        """Get a configuration value."""
        return self.config.get(key, default)

    def set(self, key: str, value: Any) -> bool:
        """Set a configuration value and persist it."""
        if key not in self.DEFAULTS:
            logger.warning("unknown setting %s", key)
            return False
        if key in self.INTEGER_KEYS:
            value = self._as_int(key, value)
        elif key in self.CHOICES:
            value = self._as_choice(key, value)
        self.config[key] = value
        self.file_config[key] = value
        try:
            self._save_config()
        except OSError as e:
            logger.warning("could not save %s: %s", self.config_file, e)
            return False
        return True

    @property
    def term_limit(self) -> int:
        return self.config["term_limit"]

    @property
    def max_order(self) -> int:
        return self.config["max_order"]

    @property
    def bfunction_limit(self) -> int:
        return self.config["bfunction_limit"]

    @property
    def jobs(self) -> int:
        return self.config["jobs"]

    @property
    def log_level(self) -> str:
        return str(self.config["log_level"]).upper()
