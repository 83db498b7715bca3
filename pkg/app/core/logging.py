import logging
import sys
from typing import Optional
from app.core.config import settings

# Libraries whose INFO chatter would drown the per-gate lines
QUIET_LOGGERS = ("langgraph", "langchain_core")


def setup_logging(level: Optional[str] = None) -> int:
    """
    Configure root logging to stdout. `level` (from --log-level) overrides
    LOG_LEVEL; an unknown name falls back to INFO.
    """
    name = (level or settings.LOG_LEVEL).upper()
    resolved = logging.getLevelName(name)
    if not isinstance(resolved, int):
        resolved = logging.INFO
    logging.basicConfig(
        level=resolved,
        format="%(asctime)s | %(levelname)s | %(name)s | %(message)s",
        handlers=[logging.StreamHandler(sys.stdout)],
    )
    for quiet in QUIET_LOGGERS:
        logging.getLogger(quiet).setLevel(max(resolved, logging.WARNING))
    if not isinstance(logging.getLevelName(name), int):
        logging.getLogger(__name__).warning(f"Unknown log level {name!r}; using INFO")
    return resolved
