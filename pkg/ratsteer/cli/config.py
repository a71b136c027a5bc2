"""Scenario files and output locations for the CLI"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional

from pydantic import ValidationError

from ratsteer.config import get_settings
from ratsteer.schemas.scenario import Scenario

logger = logging.getLogger(__name__)

DEFAULT_OUT_DIR = Path("results")


class ConfigError(Exception):
    """Raised for unreadable or invalid scenario files"""

    def __init__(self, message: str, field_path: Optional[str] = None):
        super().__init__(message)
        self.field_path = field_path


def scenario_from_dict(data: Dict[str, Any], source: str = "config") -> Scenario:
    """
    Validate a scenario document.

    Raises:
        ConfigError: Naming the dotted path of the first offending field
    """
    try:
        return Scenario.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        field_path = ".".join(str(part) for part in first["loc"]) or "<root>"
        raise ConfigError(f"{source}: {field_path}: {first['msg']}", field_path=field_path) from e


def parse_config(path: Optional[Path]) -> Scenario:
    """
    Load a JSON scenario; ``None`` gives the built-in defaults.

    Raises:
        ConfigError: If the file is missing, is not JSON or fails validation
    """
    if path is None:
        return Scenario()

    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"Config file not found: {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")

    scenario = scenario_from_dict(data, source=str(path))
    logger.info(f"Loaded scenario from {path}")
    return scenario


def dump_config(scenario: Scenario) -> str:
    """JSON text that ``parse_config`` reads back into an equal scenario"""
    return json.dumps(scenario.model_dump(mode="json"), indent=2) + "\n"


def resolve_out_dir(cli_value: Optional[Path]) -> Path:
    """RAT_STEER_OUT beats --out-dir, which beats ./results"""
    settings = get_settings()
    if settings.out is not None:
        return settings.out
    return Path(cli_value) if cli_value is not None else DEFAULT_OUT_DIR
