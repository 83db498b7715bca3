"""
Common schemas for verification reports and noise sweeps.
"""
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field, model_validator


class Check(BaseModel):
    """One recorded number against one recorded tolerance."""
    metric: str
    value: float
    tolerance: float
    comparison: Literal["max", "min"] = "max"  # "max": value ≤ tolerance, "min": value ≥ tolerance

    @property
    def passed(self) -> bool:
        if self.comparison == "max":
            return self.value <= self.tolerance
        return self.value >= self.tolerance


class GateRecord(BaseModel):
    name: str
    metrics: Dict[str, float] = Field(default_factory=dict)
    checks: List[Check] = Field(default_factory=list)
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(c.passed for c in self.checks)

    def report_dict(self) -> Dict:
        data = self.model_dump(mode="json")
        data["checks"] = [dict(c.model_dump(mode="json"), passed=c.passed) for c in self.checks]
        data["passed"] = self.passed
        return data


class SweepPoint(BaseModel):
    magnitude: float
    mean_fidelity: float
    min_fidelity: float
    mean_fidelity_dd: Optional[float] = None
    min_fidelity_dd: Optional[float] = None
    seed: int = 0


class SweepResult(BaseModel):
    """Fidelity columns along one magnitude axis."""
    channel: str
    gate: str
    axis: List[float]
    fidelities: List[float]
    min_fidelities: List[float]
    fidelities_dd: Optional[List[float]] = None
    min_fidelities_dd: Optional[List[float]] = None
    labels: List[str] = Field(default_factory=lambda: ["magnitude", "mean_fidelity", "min_fidelity"])

    @model_validator(mode="after")
    def _equal_lengths(self):
        columns = [self.fidelities, self.min_fidelities]
        if self.fidelities_dd is not None:
            columns += [self.fidelities_dd, self.min_fidelities_dd or []]
        if any(len(c) != len(self.axis) for c in columns):
            raise ValueError("Sweep columns must have one entry per axis point")
        return self

    @classmethod
    def from_points(cls, channel: str, gate: str, points: List[SweepPoint]) -> "SweepResult":
        with_dd = any(p.mean_fidelity_dd is not None for p in points)
        labels = ["magnitude", "mean_fidelity", "min_fidelity"]
        if with_dd:
            labels += ["mean_fidelity_dd", "min_fidelity_dd"]
        return cls(
            channel=channel,
            gate=gate,
            axis=[p.magnitude for p in points],
            fidelities=[p.mean_fidelity for p in points],
            min_fidelities=[p.min_fidelity for p in points],
            fidelities_dd=[p.mean_fidelity_dd for p in points] if with_dd else None,
            min_fidelities_dd=[p.min_fidelity_dd for p in points] if with_dd else None,
            labels=labels,
        )

    def rows(self) -> List[List[float]]:
        rows = []
        for i, magnitude in enumerate(self.axis):
            row = [magnitude, self.fidelities[i], self.min_fidelities[i]]
            if self.fidelities_dd is not None:
                row += [self.fidelities_dd[i], self.min_fidelities_dd[i]]
            rows.append(row)
        return rows


class VerificationReport(BaseModel):
    experiment_id: str
    experiment: str
    toolkit_version: str
    seed: int
    config: Dict
    records: List[GateRecord]
    wall_clock_seconds: float = 0.0
    sweep: Optional[SweepResult] = None

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def report_dict(self, exit_code: int) -> Dict:
        data = {
            "experiment_id": self.experiment_id,
            "experiment": self.experiment,
            "toolkit_version": self.toolkit_version,
            "seed": self.seed,
            "config": self.config,
            "records": [r.report_dict() for r in sorted(self.records, key=lambda r: r.name)],
            "passed": self.passed,
            "exit_code": exit_code,
            "wall_clock_seconds": self.wall_clock_seconds,
        }
        if self.sweep is not None:
            data["sweep"] = self.sweep.model_dump(mode="json")
        return data
