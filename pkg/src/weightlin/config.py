"""Configuration management for weightlin.

Handles loading and saving job defaults from ~/.config/weightlin/config.toml.
The file holds one top-level table per profile.
"""

import os
from pathlib import Path
from typing import Any

from .algebra.base import WeightlinError
from .constants import APP_NAME
from .models.job import Method, OutputFormat
from .models.settings import SETTING_KEYS, Settings

__all__ = [
    "ConfigError",
    "get_config_dir",
    "get_config_path",
    "ensure_config_dir",
    "load_settings",
    "save_setting",
    "coerce_setting",
]

# Default config directory
DEFAULT_CONFIG_DIR = Path.home() / ".config" / APP_NAME
CONFIG_FILE_NAME = "config.toml"

# Environment variable names
ENV_CONFIG_DIR = "WEIGHTLIN_CONFIG_DIR"
ENV_PROFILE = "WEIGHTLIN_PROFILE"
ENV_ORDER = "WEIGHTLIN_ORDER"
ENV_T_CAP = "WEIGHTLIN_T_CAP"
ENV_METHOD = "WEIGHTLIN_METHOD"
ENV_FORMAT = "WEIGHTLIN_FORMAT"
ENV_THREADS = "WEIGHTLIN_THREADS"

_ENV_BY_KEY = {
    "order": ENV_ORDER,
    "t_cap": ENV_T_CAP,
    "method": ENV_METHOD,
    "format": ENV_FORMAT,
    "threads": ENV_THREADS,
}


class ConfigError(WeightlinError):
    """Raised when there's a configuration error."""

    code = "CONFIG_ERROR"


def get_config_dir() -> Path:
    """Get the config directory, honouring ``WEIGHTLIN_CONFIG_DIR``."""
    override = os.environ.get(ENV_CONFIG_DIR)
    return Path(override) if override else DEFAULT_CONFIG_DIR


def get_config_path() -> Path:
    """Get the path to the config file."""
    return get_config_dir() / CONFIG_FILE_NAME


def ensure_config_dir() -> Path:
    """Ensure the config directory exists."""
    config_dir = get_config_dir()
    config_dir.mkdir(parents=True, exist_ok=True)
    return config_dir


def resolve_profile(profile: str | None) -> str:
    return profile or os.environ.get(ENV_PROFILE) or "default"


def coerce_setting(key: str, value: Any) -> Any:
    """Validate and convert a raw setting value.

    Raises:
        ConfigError: If the key is unknown or the value is invalid.
    """
    if key not in SETTING_KEYS:
        raise ConfigError(f"Unknown setting '{key}'", {"keys": list(SETTING_KEYS)})
    if key == "t_cap" and value in (None, "", "auto"):
        return None
    try:
        if key in ("order", "t_cap", "threads"):
            number = int(value)
            if number < (0 if key == "t_cap" else 1):
                raise ValueError(f"{number} is out of range")
            return number
        if key == "method":
            return Method(str(value)).value
        return OutputFormat(str(value)).value
    except ValueError as e:
        raise ConfigError(f"Invalid value for '{key}': {value!r} ({e})", {"key": key}) from e


def load_settings(profile: str | None = None) -> Settings:
    """Load job defaults from file and environment.

    Environment variables take precedence over the profile table.

    Args:
        profile: The profile name to load from the config file.

    Returns:
        Settings with built-in defaults for anything left unset.
    """
    profile = resolve_profile(profile)
    values = _load_file_config(profile)
    for key, env_name in _ENV_BY_KEY.items():
        if env_name in os.environ:
            values[key] = os.environ[env_name]
    settings = Settings(profile=profile)
    for key, value in values.items():
        setattr(settings, key, coerce_setting(key, value))
    return settings


def _read_all() -> dict[str, Any]:
    config_path = get_config_path()
    if not config_path.exists():
        return {}
    try:
        try:
            import tomllib
        except ImportError:
            # Python < 3.11 fallback
            import tomli as tomllib

        with open(config_path, "rb") as f:
            return tomllib.load(f)
    except Exception as e:
        raise ConfigError(f"Failed to load config file: {e}", {"path": str(config_path)}) from e


def _load_file_config(profile: str) -> dict[str, Any]:
    """Load one profile table from the TOML file."""
    table = _read_all().get(profile, {})
    if not isinstance(table, dict):
        raise ConfigError(f"Profile '{profile}' is not a table")
    return dict(table)


def save_setting(key: str, value: Any, profile: str | None = None) -> Settings:
    """Store one setting in a profile table and return the resulting settings.

    Args:
        key: Setting name.
        value: Raw value; validated before writing.
        profile: The profile name to save to.
    """
    profile = resolve_profile(profile)
    coerced = coerce_setting(key, value)
    ensure_config_dir()
    existing = _read_all()
    table = dict(existing.get(profile, {}))
    if coerced is None:
        table.pop(key, None)
    else:
        table[key] = coerced
    existing[profile] = table
    _write_toml(get_config_path(), existing)
    return load_settings(profile)


def _write_toml(path: Path, data: dict) -> None:
    """Write data to a TOML file."""
    import tomli_w

    with open(path, "wb") as f:
        tomli_w.dump(data, f)
