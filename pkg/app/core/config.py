from pydantic import BaseModel
import os
from dotenv import load_dotenv

load_dotenv()

def _parse_bool(value: str, default: bool = False) -> bool:
    """Parse boolean from environment variable."""
    if not value:
        return default
    return value.lower() in ("true", "1", "yes", "on")

def _parse_int(value: str, default: int) -> int:
    """Parse integer from environment variable."""
    if not value:
        return default
    try:
        return int(value)
    except ValueError:
        return default

def _parse_float(value: str, default: float) -> float:
    """Parse float from environment variable."""
    if not value:
        return default
    try:
        return float(value)
    except ValueError:
        return default

class Settings(BaseModel):
    """
    Process-wide settings loaded from environment variables.

    Experiment parameters (frequencies, tolerances, trials) live in the JSON
    experiment config; these settings only cover numerics defaults, threads,
    logging and where reports go.
    """
    # Environment Configuration
    ENV: str = "local"
    LOG_LEVEL: str = "INFO"

    # Worker threads for independent gates / sweep points
    WORKER_THREADS: int = 1

    # Numerics
    HERMITIAN_TOL: float = 1e-10  # relative, ‖H − H†‖_F / ‖H‖_F
    LEAKAGE_TOL: float = 1e-8

    # QRM physical layer
    QRM_TIME_STEP: float = 2e-12  # seconds
    QRM_FOCK_CUTOFF: int = 20
    QRM_KEPT_LEVELS: int = 5

    # Output
    REPORT_DIR: str = "reports"

settings = Settings(
    ENV=os.getenv("ENV", "local"),
    LOG_LEVEL=os.getenv("LOG_LEVEL", "INFO"),
    WORKER_THREADS=max(1, _parse_int(os.getenv("WORKER_THREADS", "1"), 1)),
    HERMITIAN_TOL=_parse_float(os.getenv("HERMITIAN_TOL", "1e-10"), 1e-10),
    LEAKAGE_TOL=_parse_float(os.getenv("LEAKAGE_TOL", "1e-8"), 1e-8),
    QRM_TIME_STEP=_parse_float(os.getenv("QRM_TIME_STEP", "2e-12"), 2e-12),
    QRM_FOCK_CUTOFF=_parse_int(os.getenv("QRM_FOCK_CUTOFF", "20"), 20),
    QRM_KEPT_LEVELS=_parse_int(os.getenv("QRM_KEPT_LEVELS", "5"), 5),
    REPORT_DIR=os.getenv("REPORT_DIR", "reports"),
)
