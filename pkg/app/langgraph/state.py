from typing import Any, Dict, List, Optional, TypedDict

from app.schemas.common import GateRecord, SweepResult
from app.schemas.config import ExperimentConfig


class ExperimentState(TypedDict, total=False):
    """
    State carried through one experiment run.
    """
    command: str
    config_path: Optional[str]
    overrides: Dict[str, Any]  # CLI flags layered over the config file
    config: Optional[ExperimentConfig]
    records: List[GateRecord]
    sweep: Optional[SweepResult]
    started_at: float  # perf_counter at pipeline entry
    report: Optional[Dict[str, Any]]
    output_path: Optional[str]
    error: Optional[str]
    exit_code: int
