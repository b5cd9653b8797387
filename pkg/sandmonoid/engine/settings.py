"""
sandmonoid - ENGINE: Settings
Enumeration caps and log level.

Resolution order (later wins):
  defaults < YAML file < environment < explicit overrides (CLI flags)

YAML file: $SANDMONOID_CONFIG, else ~/.sandmonoid/config.yaml if it exists.
"""

import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from pydantic import BaseModel, Field, ValidationError, field_validator

from .errors import SettingsError

logger = logging.getLogger(__name__)


# ============================================================
# PATHS + ENV
# ============================================================

CONFIG_DIR = Path.home() / ".sandmonoid"
DEFAULT_CONFIG_FILE = CONFIG_DIR / "config.yaml"

ENV_CONFIG = "SANDMONOID_CONFIG"
ENV_KEYS = {
    "cap_elements": "SANDMONOID_CAP_ELEMENTS",
    "cap_table": "SANDMONOID_CAP_TABLE",
    "log_level": "SANDMONOID_LOG_LEVEL",
}


# ============================================================
# MODEL
# ============================================================

class Settings(BaseModel):
    """Runtime caps. Caps bound the number of monoid elements, not the graph size."""

    cap_elements: int = Field(default=1_000_000, gt=0)
    cap_table: int = Field(default=1_000, gt=0)
    log_level: str = "WARNING"

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        value = value.upper()
        if value not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"unknown log level {value!r}")
        return value

    def with_overrides(self, **overrides: Optional[Any]) -> "Settings":
        """Return a copy with every non-None override applied (validated)."""
        data = self.model_dump()
        data.update({k: v for k, v in overrides.items() if v is not None})
        return _build(data, "overrides")


def _build(data: Dict[str, Any], source: str) -> Settings:
    try:
        return Settings(**data)
    except ValidationError as e:
        raise SettingsError([
            f"{source}: {'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors()
        ])


def _read_yaml(path: Path) -> Dict[str, Any]:
    try:
        data = yaml.safe_load(path.read_text())
    except (OSError, yaml.YAMLError) as e:
        raise SettingsError(f"cannot read {path}: {e}")
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise SettingsError(f"{path}: top level must be a mapping")
    unknown = set(data) - set(Settings.model_fields)
    if unknown:
        raise SettingsError(f"{path}: unknown keys {sorted(unknown)}")
    return data


def load_settings(config_file: Optional[Path] = None, env: Optional[Dict[str, str]] = None) -> Settings:
    """
    Resolve settings from file and environment.

    Args:
        config_file: Explicit YAML path (skips the env/default lookup)
        env: Environment mapping (defaults to os.environ)

    Returns:
        Validated Settings
    """
    env = os.environ if env is None else env
    data: Dict[str, Any] = {}

    path = config_file
    if path is None and env.get(ENV_CONFIG):
        path = Path(env[ENV_CONFIG])
    if path is None and DEFAULT_CONFIG_FILE.exists():
        path = DEFAULT_CONFIG_FILE
    if path is not None:
        data.update(_read_yaml(Path(path)))
        logger.debug(f"Settings loaded from {path}")

    for field, key in ENV_KEYS.items():
        if env.get(key):
            data[field] = env[key]

    return _build(data, "settings")
