"""
Report persistence: JSON documents and sweep CSV files on local disk.
"""
from pathlib import Path
from typing import Any, Dict, Optional

import csv
import json
import logging

from app.core.config import settings
from app.schemas.common import SweepResult

logger = logging.getLogger(__name__)


class ReportRepo:
    def __init__(self, report_dir: Optional[str] = None):
        self.report_dir = Path(report_dir or settings.REPORT_DIR)

    def resolve(self, output: Optional[str], default_name: str) -> Path:
        """Explicit output path, or default_name inside the report directory."""
        return Path(output) if output else self.report_dir / default_name

    def save_report(self, path: Path, report: Dict[str, Any]) -> Path:
        """Writes the report with sorted keys; floats keep full double precision."""
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        logger.info(f"Report written to {path}")
        return path

    def save_sweep_csv(self, path: Path, sweep: SweepResult) -> Path:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(sweep.labels)
            for row in sweep.rows():
                writer.writerow([repr(float(v)) for v in row])
        logger.info(f"Sweep CSV written to {path}")
        return path
