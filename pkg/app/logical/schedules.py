"""
Pulse schedules for the holonomic gates.

A schedule is a time-ordered list of constant-Hamiltonian segments; the
first segment acts first. ``sign = −1`` realizes e^{−iHt} and ``sign = +1``
realizes e^{+iHt}, the latter by flipping every coupling of the segment.
"""
from typing import Literal, Optional, Sequence, Tuple

import logging
import math

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.core.errors import DimensionMismatch
from app.logical.encoding import SINGLE_QUBIT_ENCODING, TWO_QUBIT_ENCODING, LogicalEncoding
from app.spin.hamiltonians import SpinModel, exchange_drive, holonomic_drive

logger = logging.getLogger(__name__)


class PulseSegment(BaseModel):
    model_config = ConfigDict(frozen=True)

    model: SpinModel
    duration: float = Field(ge=0.0)
    sign: Literal[-1, 1] = -1
    # Basis change inside the encoded span (±H2 / ±H4), undone later in the schedule
    conjugating: bool = False

    @property
    def num_qubits(self) -> int:
        return self.model.num_qubits

    def effective_model(self) -> SpinModel:
        """Model whose e^{−iHt} equals this segment's evolution."""
        return self.model if self.sign == -1 else self.model.scaled(-1.0)


class GateSchedule(BaseModel):
    model_config = ConfigDict(frozen=True)

    label: str
    encoding: LogicalEncoding
    segments: Tuple[PulseSegment, ...] = Field(min_length=1)

    @model_validator(mode="after")
    def _consistent_register(self):
        sizes = {s.num_qubits for s in self.segments}
        if sizes != {self.encoding.num_qubits}:
            raise ValueError(
                f"Schedule {self.label!r}: segment registers {sorted(sizes)} do not match "
                f"encoding register of {self.encoding.num_qubits} qubits"
            )
        return self

    @property
    def num_qubits(self) -> int:
        return self.encoding.num_qubits

    @property
    def duration(self) -> float:
        return sum(s.duration for s in self.segments)


def _require_positive(**rates: float) -> None:
    for name, value in rates.items():
        if not (value > 0 and math.isfinite(value)):
            raise ValueError(f"{name} must be positive and finite, got {value}")


def holonomic_pulse(num_qubits: int, control: int, pair: Tuple[int, int], theta: float, omega: float) -> PulseSegment:
    """One cyclic pulse of the bright state: duration π/Ω."""
    return PulseSegment(
        model=holonomic_drive(num_qubits, control, pair, theta, omega),
        duration=math.pi / omega,
        sign=-1,
    )


def phase_gate_segments(
    num_qubits: int,
    control: int,
    pair: Tuple[int, int],
    theta: float,
    omega: float,
    omega_pair: float,
) -> Tuple[PulseSegment, ...]:
    """
    e^{+iπ/(4Ω_p)H_p} U(θ) U(0) e^{−iπ/(4Ω_p)H_p}, listed in time order: the
    pair exchange, the θ=0 pulse, the θ pulse, the inverse exchange.
    """
    quarter = math.pi / (4.0 * omega_pair)
    exchange = exchange_drive(num_qubits, pair, omega_pair)
    return (
        PulseSegment(model=exchange, duration=quarter, sign=-1, conjugating=True),
        holonomic_pulse(num_qubits, control, pair, 0.0, omega),
        holonomic_pulse(num_qubits, control, pair, theta, omega),
        PulseSegment(model=exchange, duration=quarter, sign=1, conjugating=True),
    )


def schedule_u1(theta: float, omega: float) -> GateSchedule:
    _require_positive(omega=omega)
    return GateSchedule(
        label="U1",
        encoding=SINGLE_QUBIT_ENCODING,
        segments=(holonomic_pulse(3, 0, (1, 2), theta, omega),),
    )


def schedule_u2(theta: float, omega: float, omega12: float) -> GateSchedule:
    _require_positive(omega=omega, omega12=omega12)
    return GateSchedule(
        label="U2",
        encoding=SINGLE_QUBIT_ENCODING,
        segments=phase_gate_segments(3, 0, (1, 2), theta, omega, omega12),
    )


def schedule_u4(theta_prime: float, omega_prime: float, omega34: float) -> GateSchedule:
    """ZZ phase gate: qubit 2 (index 1) plays the auxiliary role for the pair (3, 4)."""
    _require_positive(omega_prime=omega_prime, omega34=omega34)
    return GateSchedule(
        label="U4",
        encoding=TWO_QUBIT_ENCODING,
        segments=phase_gate_segments(4, 1, (2, 3), theta_prime, omega_prime, omega34),
    )


def remap_schedule(
    schedule: GateSchedule,
    qubit_map: Sequence[int],
    encoding: LogicalEncoding,
    label: Optional[str] = None,
) -> GateSchedule:
    """Move a schedule onto a larger register; qubit q becomes qubit_map[q]."""
    if len(qubit_map) != schedule.num_qubits:
        raise DimensionMismatch(
            f"Qubit map of length {len(qubit_map)} for a {schedule.num_qubits}-qubit schedule"
        )
    qubit_map = tuple(qubit_map)
    segments = tuple(
        seg.model_copy(update={"model": seg.model.remapped(qubit_map, encoding.num_qubits)})
        for seg in schedule.segments
    )
    return GateSchedule(label=label or schedule.label, encoding=encoding, segments=segments)


def compose_schedules(label: str, encoding: LogicalEncoding, *schedules: GateSchedule) -> GateSchedule:
    """Concatenate schedules in time order (first argument runs first)."""
    segments = tuple(seg for schedule in schedules for seg in schedule.segments)
    return GateSchedule(label=label, encoding=encoding, segments=segments)
