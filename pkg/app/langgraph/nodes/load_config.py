from pathlib import Path
from typing import Any, Dict, Optional

import json
import logging
import time

from pydantic import ValidationError

from app.core.errors import ConfigError
from app.langgraph.state import ExperimentState
from app.schemas.config import ExperimentConfig

logger = logging.getLogger(__name__)


def _merge(base: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def read_config(command: str, path: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
    """
    Reads the JSON config (if any), layers the CLI overrides on top and
    validates the result.

    Raises:
        ConfigError: the file is missing or malformed, or validation failed.
    """
    try:
        document: Dict[str, Any] = {}
        if path:
            document = json.loads(Path(path).read_text(encoding="utf-8"))
            if not isinstance(document, dict):
                raise ValueError("config file must hold a JSON object")
        document = _merge(document, overrides or {})
        document["experiment"] = command
        return ExperimentConfig.model_validate(document)
    except (OSError, ValueError, ValidationError) as e:
        # json.JSONDecodeError is a ValueError
        raise ConfigError(f"Invalid experiment config {path or '<defaults>'}: {e}") from e


def load_config_node(state: ExperimentState) -> Dict[str, Any]:
    """Validated config, or the config exit code when it cannot be built."""
    started_at = time.perf_counter()
    try:
        config = read_config(state["command"], state.get("config_path"), state.get("overrides"))
    except ConfigError as e:
        logger.error(str(e))
        return {"error": f"config error: {e}", "exit_code": e.exit_code, "started_at": started_at}

    logger.info(f"Loaded {config.experiment.value} config: gates={[g.value for g in config.gates]}, seed={config.seed}")
    return {"config": config, "started_at": started_at}
