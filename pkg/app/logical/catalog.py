"""
Universal gate set realized by the holonomic schedules.

Each entry pairs a schedule with the exact logical unitary it must produce
once its recorded global phase is applied: ‖g·P(U) − expected‖_F ≈ 0.
"""
from enum import Enum
from typing import Callable, Dict, Optional, Tuple

import cmath
import logging
import math

import numpy as np
from pydantic import BaseModel, ConfigDict

from app.core.constants import DEFAULT_OMEGA, DEFAULT_OMEGA_PRIME
from app.core.errors import UnknownGate
from app.logical.encoding import AUXILIARY_TWO_QUBIT_ENCODING
from app.logical.schedules import (
    GateSchedule,
    compose_schedules,
    remap_schedule,
    schedule_u1,
    schedule_u2,
    schedule_u4,
)
from app.numerics.linalg import DenseOperator
from app.spin.closed_forms import CNOT_GATE, CZ_GATE, HADAMARD, S_GATE, T_GATE, u4_analytic
from app.spin.operators import SIGMA_X, SIGMA_Z

logger = logging.getLogger(__name__)


class GateKind(str, Enum):
    X = "X"
    Z = "Z"
    H = "H"
    S = "S"
    T = "T"
    ZZ_PHASE = "ZZ_PHASE"
    CZ = "CZ"
    CNOT = "CNOT"


TABLE_GATES: Tuple[GateKind, ...] = (
    GateKind.X, GateKind.Z, GateKind.H, GateKind.S, GateKind.T, GateKind.ZZ_PHASE, GateKind.CZ,
)
TWO_QUBIT_GATES = frozenset({GateKind.ZZ_PHASE, GateKind.CZ, GateKind.CNOT})


class StandardGate(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: GateKind
    parameter: Optional[float] = None
    phase_angle: float = 0.0

    @property
    def global_phase(self) -> complex:
        return cmath.exp(1j * self.phase_angle)

    @property
    def num_logical(self) -> int:
        return 2 if self.kind in TWO_QUBIT_GATES else 1


class DriveRates(BaseModel):
    """Spin-layer drive strengths in rad/s."""
    model_config = ConfigDict(frozen=True)

    omega: float = DEFAULT_OMEGA
    omega_prime: float = DEFAULT_OMEGA_PRIME
    omega12: float = DEFAULT_OMEGA
    omega34: float = DEFAULT_OMEGA_PRIME


_GATES: Dict[GateKind, StandardGate] = {
    GateKind.X: StandardGate(kind=GateKind.X, parameter=math.pi / 2, phase_angle=math.pi),
    GateKind.Z: StandardGate(kind=GateKind.Z, parameter=0.0),
    GateKind.H: StandardGate(kind=GateKind.H, parameter=-math.pi / 4),
    GateKind.S: StandardGate(kind=GateKind.S, parameter=math.pi / 4, phase_angle=math.pi / 4),
    GateKind.T: StandardGate(kind=GateKind.T, parameter=math.pi / 8, phase_angle=math.pi / 8),
    GateKind.ZZ_PHASE: StandardGate(kind=GateKind.ZZ_PHASE, parameter=-math.pi / 4),
    # e^{−iπ/4}(S⊗S)U4 with each S carrying its own e^{iπ/4}: net e^{iπ/4} on the bare schedule
    GateKind.CZ: StandardGate(kind=GateKind.CZ, parameter=-math.pi / 4, phase_angle=math.pi / 4),
    GateKind.CNOT: StandardGate(kind=GateKind.CNOT, parameter=-math.pi / 4, phase_angle=math.pi / 4),
}


def standard_gate(name) -> StandardGate:
    """Look up a gate by name (case-insensitive) or GateKind."""
    try:
        kind = name if isinstance(name, GateKind) else GateKind(str(name).strip().upper())
    except ValueError as e:
        raise UnknownGate(f"Unknown gate {name!r}; known gates: {[k.value for k in GateKind]}") from e
    return _GATES[kind]


def _relabel(schedule: GateSchedule, label: str) -> GateSchedule:
    return schedule.model_copy(update={"label": label})


def _s_on_pair(pair: Tuple[int, int], rates: DriveRates) -> GateSchedule:
    return remap_schedule(
        schedule_u2(math.pi / 4, rates.omega, rates.omega12),
        (0,) + pair,
        AUXILIARY_TWO_QUBIT_ENCODING,
        label=f"S{pair}",
    )


def _h_on_pair(pair: Tuple[int, int], rates: DriveRates) -> GateSchedule:
    return remap_schedule(
        schedule_u1(-math.pi / 4, rates.omega),
        (0,) + pair,
        AUXILIARY_TWO_QUBIT_ENCODING,
        label=f"H{pair}",
    )


def _cz_schedule(rates: DriveRates, theta_prime: float = -math.pi / 4) -> GateSchedule:
    zz = remap_schedule(
        schedule_u4(theta_prime, rates.omega_prime, rates.omega34),
        (1, 2, 3, 4),
        AUXILIARY_TWO_QUBIT_ENCODING,
    )
    return compose_schedules(
        "CZ", AUXILIARY_TWO_QUBIT_ENCODING, zz, _s_on_pair((1, 2), rates), _s_on_pair((3, 4), rates)
    )


def _cnot_schedule(rates: DriveRates, theta_prime: float = -math.pi / 4) -> GateSchedule:
    target_h = _h_on_pair((3, 4), rates)
    return compose_schedules("CNOT", AUXILIARY_TWO_QUBIT_ENCODING, target_h, _cz_schedule(rates, theta_prime), target_h)


# Builders take the drive rates and the gate angle (θ for U1/U2, θ′ for U4)
_BUILDERS: Dict[GateKind, Callable[[DriveRates, float], Tuple[GateSchedule, DenseOperator]]] = {
    GateKind.X: lambda r, a: (schedule_u1(a, r.omega), SIGMA_X),
    GateKind.Z: lambda r, a: (schedule_u1(a, r.omega), SIGMA_Z),
    GateKind.H: lambda r, a: (schedule_u1(a, r.omega), HADAMARD),
    GateKind.S: lambda r, a: (schedule_u2(a, r.omega, r.omega12), S_GATE),
    GateKind.T: lambda r, a: (schedule_u2(a, r.omega, r.omega12), T_GATE),
    GateKind.ZZ_PHASE: lambda r, a: (schedule_u4(a, r.omega_prime, r.omega34), u4_analytic(a)),
    GateKind.CZ: lambda r, a: (_cz_schedule(r, a), CZ_GATE),
    GateKind.CNOT: lambda r, a: (_cnot_schedule(r, a), CNOT_GATE),
}

# Only the two-qubit phase gate is a family; the others are fixed points of it
PARAMETRIC_GATES = frozenset({GateKind.ZZ_PHASE})


def gate_catalog(gate: StandardGate, rates: Optional[DriveRates] = None) -> Tuple[GateSchedule, DenseOperator]:
    """
    Schedule realizing `gate` and the logical unitary it must equal after
    multiplying by gate.global_phase.

    ZZ_PHASE follows gate.parameter (θ′, default −π/4). Every other kind is a
    fixed gate and only accepts its catalog angle.

    Raises:
        UnknownGate: the gate kind has no realization, or a fixed gate was
            given a different angle.
    """
    builder = _BUILDERS.get(gate.kind)
    if builder is None:
        raise UnknownGate(f"No realization for gate {gate.kind}")
    default = _GATES[gate.kind].parameter
    angle = default if gate.parameter is None else gate.parameter
    if not math.isfinite(angle):
        raise UnknownGate(f"Gate {gate.kind.value} needs a finite angle, got {angle}")
    if gate.kind not in PARAMETRIC_GATES and not math.isclose(angle, default, rel_tol=0.0, abs_tol=1e-12):
        raise UnknownGate(f"{gate.kind.value} is fixed at angle {default}; got {angle}")
    schedule, expected = builder(rates or DriveRates(), angle)
    return _relabel(schedule, gate.kind.value), np.array(expected, dtype=np.complex128)
