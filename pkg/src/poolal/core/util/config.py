"""Configuration utilities."""

import json
from pathlib import Path
from typing import Any

from poolal.core.errors import InvalidConfigError


def load_dotenv_if_exists(path: str = ".env") -> bool:
    """Load .env file if it exists."""
    try:
        from dotenv import load_dotenv
        return load_dotenv(path)
    except ImportError:
        return False


def load_json_config(path: Path) -> dict[str, Any]:
    """Read a JSON config document.

    Raises:
        InvalidConfigError: If the file is missing, unreadable or not a JSON object.
    """
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError as e:
        raise InvalidConfigError(f"config file not found: {path}") from e
    except (OSError, json.JSONDecodeError) as e:
        raise InvalidConfigError(f"cannot read config {path}: {e}") from e
    if not isinstance(payload, dict):
        raise InvalidConfigError(f"config {path} must be a JSON object")
    return payload


def deep_merge(base: dict[str, Any], override: dict[str, Any]) -> dict[str, Any]:
    """Recursively merge ``override`` into a copy of ``base``.

    Nested dicts merge key by key; any other value in ``override`` replaces
    the base value. ``None`` overrides are skipped so unset CLI flags fall
    through to the file or defaults.
    """
    merged = dict(base)
    for key, value in override.items():
        if value is None:
            continue
        if isinstance(value, dict):
            current = merged.get(key)
            merged[key] = deep_merge(current if isinstance(current, dict) else {}, value)
        else:
            merged[key] = value
    return merged
