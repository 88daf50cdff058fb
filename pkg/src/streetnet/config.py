"""Runtime configuration: defaults < config file < environment < flags."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields
from pathlib import Path

from .client import (
    DEFAULT_MAX_RETRIES,
    DEFAULT_MAX_TILE_KM2,
    DEFAULT_NOMINATIM_URL,
    DEFAULT_OVERPASS_URL,
    DEFAULT_TIMEOUT_S,
)
from .errors import FileParseError

ENV_PREFIX = "STREETNET_"


@dataclass
class Config:
    overpass_url: str = DEFAULT_OVERPASS_URL
    nominatim_url: str = DEFAULT_NOMINATIM_URL
    elevation_url: str = ""
    cache_dir: str = str(Path.home() / ".cache" / "streetnet")
    mode: str = "cache_first"  # live | cache_first | fixture_only
    timeout_s: float = DEFAULT_TIMEOUT_S
    max_tile_km2: float = DEFAULT_MAX_TILE_KM2
    max_retries: int = DEFAULT_MAX_RETRIES
    rate_limit_s: float = 1.0
    default_buffer_m: float = 500.0
    default_network_type: str = "drive"
    simplify_mode: str = "strict"  # strict | non-strict

    def validate(self) -> "Config":
        if self.default_buffer_m < 0:
            raise ValueError("buffer must be >= 0")
        if self.mode not in ("live", "cache_first", "fixture_only"):
            raise ValueError(f"unknown client mode {self.mode!r}")
        if self.simplify_mode not in ("strict", "non-strict"):
            raise ValueError(f"unknown simplify mode {self.simplify_mode!r}")
        return self


def _coerce(value: str, target_type):
    if target_type is float:
        return float(value)
    if target_type is int:
        return int(value)
    return value


def load_config(
    config_file: str | None = None,
    env: dict | None = None,
    overrides: dict | None = None,
) -> Config:
    """Merge the three override layers on top of the dataclass defaults.

    overrides (CLI flags) win over environment variables (STREETNET_*,
    upper-cased field names) which win over the JSON config file.
    """
    env = os.environ if env is None else env
    values: dict = {}

    if config_file:
        try:
            raw = json.loads(Path(config_file).read_text())
        except (OSError, ValueError) as exc:
            raise FileParseError(f"cannot read config {config_file}: {exc}") from exc
        if not isinstance(raw, dict):
            raise FileParseError(f"config {config_file} must be a JSON object")
        values.update(raw)

    field_types = {f.name: f.type for f in fields(Config)}
    for name in field_types:
        env_key = ENV_PREFIX + name.upper()
        if env_key in env:
            values[name] = env[env_key]

    if overrides:
        values.update({k: v for k, v in overrides.items() if v is not None})

    known = {}
    for f in fields(Config):
        if f.name in values:
            value = values[f.name]
            if isinstance(value, str) and f.type in ("float", "int"):
                value = _coerce(value, float if f.type == "float" else int)
            known[f.name] = value
    return Config(**known).validate()
