"""
Experiment configuration document.

A JSON file validated against ExperimentConfig; unknown keys are rejected at
every level. Defaults are the reference device and drive parameters.
"""
from enum import Enum
from typing import List, Optional

import math

from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, PositiveInt, field_validator

from app.core.config import settings
from app.core.constants import (
    DD_COMMUTATOR_TOLERANCE,
    DEFAULT_OMEGA,
    DEFAULT_OMEGA_PRIME,
    DFS_TOLERANCE,
    GATE_TOLERANCE,
    HOLONOMY_TOLERANCE,
    LEAKAGE_LIMIT,
    QRM_COUPLING_G,
    QRM_OMEGA_C,
    QRM_OMEGA_Q_HIGH,
    QRM_OMEGA_Q_LOW,
    QRM_SINGLE_QUBIT_FIDELITY,
    QRM_TWO_QUBIT_FIDELITY,
    STEP_STABILITY_TOLERANCE,
    TRUNCATION_STABILITY_TOLERANCE,
)
from app.logical.catalog import TABLE_GATES, GateKind
from app.noise.channels import NoiseKind


class ExperimentKind(str, Enum):
    VERIFY_GATES = "verify-gates"
    VERIFY_PROTECTION = "verify-protection"
    SIMULATE_QRM = "simulate-qrm"
    NOISE_SWEEP = "noise-sweep"


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class SpinParameters(_Strict):
    """Drive strengths in rad/s."""
    omega: PositiveFloat = DEFAULT_OMEGA
    omega_prime: PositiveFloat = DEFAULT_OMEGA_PRIME
    omega12: PositiveFloat = DEFAULT_OMEGA
    omega34: PositiveFloat = DEFAULT_OMEGA_PRIME


class QrmParameters(_Strict):
    omega_c: PositiveFloat = QRM_OMEGA_C
    omega_q_high: PositiveFloat = QRM_OMEGA_Q_HIGH
    omega_q_low: PositiveFloat = QRM_OMEGA_Q_LOW
    g: PositiveFloat = QRM_COUPLING_G
    fock_cutoff: int = Field(default=settings.QRM_FOCK_CUTOFF, ge=10)
    kept_levels: PositiveInt = settings.QRM_KEPT_LEVELS
    time_step: PositiveFloat = settings.QRM_TIME_STEP
    stability_checks: bool = False


class ProtectionParameters(_Strict):
    samples: int = Field(default=100, ge=2)
    # σz on the first auxiliary (or first qubit) in units of the drive rate; 0 runs the clean certificates
    inject_detuning: float = 0.0
    dephasing_phases: PositiveInt = 20
    dd_periods: List[PositiveFloat] = Field(default_factory=lambda: [1e-3, 2.15e-3, 4.64e-3, 1e-2, 2.15e-2, 4.64e-2, 1e-1])


class NoiseParameters(_Strict):
    kind: NoiseKind = NoiseKind.INDEPENDENT_Z
    magnitudes: List[float] = Field(default_factory=lambda: [0.0, 0.01, 0.03, 0.1])
    # Hamiltonian magnitudes are multiples of the drive rate Ω when set
    relative_to_omega: bool = True
    with_dd: bool = False
    cycles: PositiveInt = 1
    qubit: Optional[int] = Field(default=None, ge=0)
    gate: GateKind = GateKind.S

    @field_validator("magnitudes")
    @classmethod
    def _sorted_magnitudes(cls, magnitudes: List[float]) -> List[float]:
        if not magnitudes:
            raise ValueError("At least one noise magnitude is required")
        if not all(math.isfinite(m) and m >= 0.0 for m in magnitudes):
            raise ValueError(f"Noise magnitudes must be finite and non-negative, got {magnitudes}")
        return sorted(set(magnitudes))


class Tolerances(_Strict):
    gate: PositiveFloat = GATE_TOLERANCE
    holonomy: PositiveFloat = HOLONOMY_TOLERANCE
    dd_commutator: PositiveFloat = DD_COMMUTATOR_TOLERANCE
    dfs: PositiveFloat = DFS_TOLERANCE
    dd_slope_with: PositiveFloat = 2.0
    dd_slope_without: PositiveFloat = 1.0
    dd_slope_band: PositiveFloat = 0.2
    single_qubit_fidelity: PositiveFloat = QRM_SINGLE_QUBIT_FIDELITY
    two_qubit_fidelity: PositiveFloat = QRM_TWO_QUBIT_FIDELITY
    leakage: PositiveFloat = LEAKAGE_LIMIT
    truncation_stability: PositiveFloat = TRUNCATION_STABILITY_TOLERANCE
    step_stability: PositiveFloat = STEP_STABILITY_TOLERANCE


class ExperimentConfig(_Strict):
    experiment: ExperimentKind = ExperimentKind.VERIFY_GATES
    gates: List[GateKind] = Field(default_factory=lambda: list(TABLE_GATES))
    spin: SpinParameters = Field(default_factory=SpinParameters)
    qrm: QrmParameters = Field(default_factory=QrmParameters)
    protection: ProtectionParameters = Field(default_factory=ProtectionParameters)
    noise: NoiseParameters = Field(default_factory=NoiseParameters)
    tolerances: Tolerances = Field(default_factory=Tolerances)
    trials: PositiveInt = 30
    seed: int = 0
    output: Optional[str] = None

    @field_validator("gates", mode="before")
    @classmethod
    def _normalize_gates(cls, gates):
        if isinstance(gates, str):
            gates = [g for g in gates.split(",") if g.strip()]
        return [g.strip().upper() if isinstance(g, str) else g for g in gates]

    @field_validator("gates")
    @classmethod
    def _unique_gates(cls, gates: List[GateKind]) -> List[GateKind]:
        if not gates:
            raise ValueError("At least one gate must be selected")
        return sorted(set(gates), key=lambda g: g.value)
