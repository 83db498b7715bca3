from typing import Any, Dict

import logging

from app.core.errors import EXIT_NUMERICAL_FAILURE
from app.db.report_repo import ReportRepo
from app.langgraph.state import ExperimentState

logger = logging.getLogger(__name__)


def write_report_node(state: ExperimentState) -> Dict[str, Any]:
    """Writes the JSON report and, for sweeps, the CSV next to it."""
    report = state["report"]
    config = state["config"]
    repo = ReportRepo()
    try:
        path = repo.resolve(config.output, f"{report['experiment']}-{report['experiment_id'][:12]}.json")
        repo.save_report(path, report)
        sweep = state.get("sweep")
        if sweep is not None:
            repo.save_sweep_csv(path.with_suffix(".csv"), sweep)
    except OSError as e:
        logger.error(f"Could not write report: {e}", exc_info=True)
        return {"error": f"report not written: {e}", "exit_code": EXIT_NUMERICAL_FAILURE}
    return {"output_path": str(path)}
