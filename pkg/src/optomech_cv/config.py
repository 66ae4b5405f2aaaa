"""Config file ingestion: flat TOML, SI units, PhysicalParams field names."""

from __future__ import annotations

import dataclasses

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .errors import ConfigError
from .params import PhysicalParams

_FIELDS = {f.name: f for f in dataclasses.fields(PhysicalParams)}
_REQUIRED = tuple(
    f.name
    for f in dataclasses.fields(PhysicalParams)
    if f.default is dataclasses.MISSING
)
_STRING_FIELDS = ("detuning_mode",)


def params_from_mapping(data) -> tuple[PhysicalParams, dict]:
    """Build PhysicalParams from a flat mapping.

    Returns (params, assumed) where ``assumed`` maps each defaulted field
    that was absent from the input to the default value used.
    """
    if not isinstance(data, dict):
        raise ConfigError(f"config must be a flat table, got {type(data).__name__}")
    unknown = sorted(set(data) - set(_FIELDS))
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    kwargs = {}
    for name, value in data.items():
        if isinstance(value, (dict, list)):
            raise ConfigError(f"config must be flat; key {name!r} holds a table/array")
        if name in _STRING_FIELDS:
            if not isinstance(value, str):
                raise ConfigError(f"{name} must be a string, got {value!r}")
            kwargs[name] = value
        else:
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(f"{name} must be a number, got {value!r}")
            kwargs[name] = float(value)
    missing = sorted(set(_REQUIRED) - set(kwargs))
    if missing:
        raise ConfigError(f"missing required config keys: {', '.join(missing)}")
    try:
        params = PhysicalParams(**kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    assumed = {
        f.name: f.default
        for f in dataclasses.fields(PhysicalParams)
        if f.default is not dataclasses.MISSING and f.name not in data
    }
    return params, assumed


def read_params(path) -> tuple[PhysicalParams, dict]:
    """Read a flat TOML config file; see ``params_from_mapping``."""
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML in {path}: {exc}") from exc
    return params_from_mapping(data)


def apply_overrides(params: PhysicalParams, assignments) -> PhysicalParams:
    """Apply ``key=value`` override strings to an existing parameter set."""
    changes = {}
    for item in assignments or ():
        key, sep, raw = item.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigError(f"override must look like key=value, got {item!r}")
        if key not in _FIELDS:
            raise ConfigError(f"unknown parameter {key!r} in override")
        raw = raw.strip()
        if key in _STRING_FIELDS:
            changes[key] = raw
        else:
            try:
                changes[key] = float(raw)
            except ValueError as exc:
                raise ConfigError(f"override {key}={raw!r} is not a number") from exc
    try:
        return params.replace(**changes) if changes else params
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
