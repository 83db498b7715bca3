from typing import Any, Dict

import hashlib
import json
import logging
import time

from app import __version__
from app.core.errors import EXIT_OK, EXIT_TOLERANCE_FAILURE
from app.langgraph.state import ExperimentState
from app.schemas.common import VerificationReport

logger = logging.getLogger(__name__)


def experiment_id(config_echo: Dict[str, Any]) -> str:
    canonical = json.dumps(config_echo, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def evaluate_report_node(state: ExperimentState) -> Dict[str, Any]:
    """
    Assembles the report. Pass/fail comes only from the recorded checks.
    """
    config = state["config"]
    echo = config.model_dump(mode="json")
    report = VerificationReport(
        experiment_id=experiment_id(echo),
        experiment=config.experiment.value,
        toolkit_version=__version__,
        seed=config.seed,
        config=echo,
        records=state.get("records") or [],
        wall_clock_seconds=time.perf_counter() - state.get("started_at", time.perf_counter()),
        sweep=state.get("sweep"),
    )
    exit_code = EXIT_OK if report.passed else EXIT_TOLERANCE_FAILURE
    failed = [r.name for r in report.records if not r.passed]
    if failed:
        logger.warning(f"{len(failed)} record(s) outside tolerance: {failed}")
    return {"report": report.report_dict(exit_code), "exit_code": exit_code}
