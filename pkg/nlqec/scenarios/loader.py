import json
from pathlib import Path
from typing import Any

import yaml
from pydantic import ValidationError

from nlqec.antypes import ScenarioConfig
from nlqec.core.errors import ConfigError


def parse_config(data: Any) -> ScenarioConfig:
    """
    Validate a decoded config document

    :raises ConfigError: on schema violations, including unknown keys
    """
    if not isinstance(data, dict):
        raise ConfigError("A scenario config must be a JSON object")
    try:
        return ScenarioConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(f"Invalid scenario config: {exc}") from exc


def load_config(path: str | Path) -> ScenarioConfig:
    """
    Read a scenario config from a JSON file, or YAML for ``.yaml``/``.yml``

    :param path: config file
    :type path: str | Path
    :raises ConfigError: when the file cannot be read, parsed or validated
    :return: validated config
    :rtype: ScenarioConfig
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
        if path.suffix.lower() in (".yaml", ".yml"):
            data = yaml.safe_load(text)
        else:
            data = json.loads(text)
    except (OSError, UnicodeDecodeError) as exc:
        raise ConfigError(f"Cannot read config [{path}]: {exc}") from exc
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise ConfigError(f"Malformed config [{path}]: {exc}") from exc
    return parse_config(data)


def dump_config(config: ScenarioConfig) -> str:
    """JSON text of a config, the format :func:`load_config` reads back."""
    return config.model_dump_json(indent=2, exclude_none=True)


def with_override(config: ScenarioConfig, path: str, value: Any) -> ScenarioConfig:
    """
    Copy of ``config`` with the dotted ``path`` set to ``value``

    The last segment may add a key to a mapping such as ``alphabet.fixed``.

    :raises ConfigError: for a path that does not exist or an invalid value
    """
    data = config.model_dump(exclude_none=True)
    keys = path.split(".")
    node = data
    for key in keys[:-1]:
        if not isinstance(node, dict) or key not in node:
            raise ConfigError(f"Unknown config path [{path}]")
        node = node[key]
    if not isinstance(node, dict):
        raise ConfigError(f"Unknown config path [{path}]")
    node[keys[-1]] = value
    return parse_config(data)
