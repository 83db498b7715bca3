from typing import Any, Callable, Dict

import logging

from app.core.errors import ToolkitError
from app.langgraph.state import ExperimentState
from app.services.qrm_service import QrmSimulationService
from app.services.sweep_service import NoiseSweepService
from app.services.verification_service import GateVerificationService, ProtectionVerificationService

logger = logging.getLogger(__name__)


def _guarded(kind: str, run: Callable[[], Dict[str, Any]]) -> Dict[str, Any]:
    try:
        return run()
    except ToolkitError as e:
        logger.error(f"{kind} aborted: {e}", exc_info=True)
        return {"error": f"{type(e).__name__}: {e}", "exit_code": e.exit_code}


def verify_gates_node(state: ExperimentState) -> Dict[str, Any]:
    service = GateVerificationService(state["config"])
    return _guarded("verify-gates", lambda: {"records": service.run()})


def verify_protection_node(state: ExperimentState) -> Dict[str, Any]:
    service = ProtectionVerificationService(state["config"])
    return _guarded("verify-protection", lambda: {"records": service.run()})


def simulate_qrm_node(state: ExperimentState) -> Dict[str, Any]:
    service = QrmSimulationService(state["config"])
    return _guarded("simulate-qrm", lambda: {"records": service.run()})


def noise_sweep_node(state: ExperimentState) -> Dict[str, Any]:
    service = NoiseSweepService(state["config"])

    def run() -> Dict[str, Any]:
        records, sweep = service.run()
        return {"records": records, "sweep": sweep}

    return _guarded("noise-sweep", run)
