"""JSON experiment configs: ``{"v": 1, "command": ..., <option>: value, ...}``.

Keys mirror the long CLI option names with dashes turned into
underscores.  Unknown keys are rejected; command-line flags override
values from the file.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

CONFIG_VERSION = 1


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    command: str | None
    options: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: dict, allowed: dict[str, set[str]]) -> "ExperimentConfig":
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        data = dict(data)
        v = data.pop("v", None)
        if v != CONFIG_VERSION:
            raise ConfigError(f"config version must be {CONFIG_VERSION}, got {v!r}")
        command = data.pop("command", None)
        if command is not None and command not in allowed:
            raise ConfigError(f"unknown command {command!r}")
        keys = allowed[command] if command is not None else set().union(*allowed.values())
        unknown = sorted(set(data) - keys)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        return cls(command, data)

    @classmethod
    def load(cls, path: str | Path, allowed: dict[str, set[str]]) -> "ExperimentConfig":
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as e:
            raise ConfigError(f"{path}: invalid JSON: {e}") from e
        return cls.from_dict(data, allowed)

    def merge_into(self, args, explicit: set[str]) -> None:
        """Fill ``args`` from the config wherever no flag was given."""
        for k, val in self.options.items():
            if k not in explicit:
                setattr(args, k, val)
