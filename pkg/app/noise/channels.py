"""
Coherent noise channels applied to gate schedules.

Hamiltonian-type channels add a static z term to every segment; the
amplitude channel rescales every drive coupling by (1 + ε).
"""
from enum import Enum
from typing import List, Optional, Tuple

import logging
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from app.core.errors import IndexOutOfRange
from app.logical.schedules import GateSchedule
from app.numerics.linalg import DenseOperator
from app.protection.dephasing import NoiseSpec
from app.spin.hamiltonians import build_xy_hamiltonian

logger = logging.getLogger(__name__)


class NoiseKind(str, Enum):
    COLLECTIVE_Z = "collective_z"
    INDEPENDENT_Z = "independent_z"
    STATIC_DETUNING = "static_detuning"
    CONTROL_AMPLITUDE_ERROR = "control_amplitude_error"


HAMILTONIAN_KINDS = frozenset({NoiseKind.COLLECTIVE_Z, NoiseKind.INDEPENDENT_Z, NoiseKind.STATIC_DETUNING})


class NoiseChannel(BaseModel):
    """
    magnitude is in rad/s for the z channels and a dimensionless fraction
    for control_amplitude_error.
    """
    model_config = ConfigDict(frozen=True)

    kind: NoiseKind
    magnitude: float
    seed: int = 0
    qubit: Optional[int] = Field(default=None, ge=0)

    @field_validator("magnitude")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("Noise magnitude must be finite")
        return value

    @property
    def is_hamiltonian(self) -> bool:
        return self.kind in HAMILTONIAN_KINDS

    def with_magnitude(self, magnitude: float) -> "NoiseChannel":
        return self.model_copy(update={"magnitude": magnitude})


def noise_spec(channel: NoiseChannel, schedule: GateSchedule) -> Optional[NoiseSpec]:
    """Static z rates of a Hamiltonian-type channel on the schedule's register."""
    n = schedule.num_qubits
    if channel.kind == NoiseKind.COLLECTIVE_Z:
        return NoiseSpec(rates=(channel.magnitude,), collective=True)
    if channel.kind == NoiseKind.INDEPENDENT_Z:
        weights = np.random.default_rng(channel.seed).standard_normal(n)
        return NoiseSpec(rates=tuple(float(channel.magnitude * w) for w in weights))
    if channel.kind == NoiseKind.STATIC_DETUNING:
        qubit = schedule.encoding.pairs[0][0] if channel.qubit is None else channel.qubit
        if qubit >= n:
            raise IndexOutOfRange(f"Detuned qubit {qubit} outside a {n}-qubit register")
        rates = [0.0] * n
        rates[qubit] = channel.magnitude
        return NoiseSpec(rates=tuple(rates))
    return None


def noise_hamiltonian(channel: NoiseChannel, schedule: GateSchedule) -> Optional[DenseOperator]:
    spec = noise_spec(channel, schedule)
    if spec is None:
        return None
    return spec.hamiltonian(schedule.num_qubits)


def noisy_segment_hamiltonians(channel: NoiseChannel, schedule: GateSchedule) -> List[Tuple[DenseOperator, float]]:
    """(H_segment + noise, duration) for every segment in time order."""
    scale = 1.0 + channel.magnitude if channel.kind == NoiseKind.CONTROL_AMPLITUDE_ERROR else 1.0
    extra = noise_hamiltonian(channel, schedule)
    segments = []
    for segment in schedule.segments:
        h = build_xy_hamiltonian(segment.effective_model().scaled(scale))
        if extra is not None:
            h = h + extra
        segments.append((h, segment.duration))
    return segments


def check_perturbative_bound(channel: NoiseChannel, schedule: GateSchedule) -> bool:
    """False (and a warning) when the channel is outside the perturbative regime."""
    if channel.kind == NoiseKind.CONTROL_AMPLITUDE_ERROR:
        strength = abs(channel.magnitude)
    else:
        strength = abs(channel.magnitude) * schedule.duration
    if strength >= 1.0:
        logger.warning(
            f"{channel.kind.value} magnitude {channel.magnitude:.3e} on {schedule.label} "
            f"is outside the perturbative bound (strength {strength:.3f} ≥ 1)"
        )
        return False
    return True
