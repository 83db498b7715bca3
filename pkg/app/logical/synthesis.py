from typing import Optional

import logging

import numpy as np

from app.core.config import settings
from app.core.errors import DimensionMismatch, LeakageDetected
from app.logical.encoding import LogicalEncoding
from app.logical.schedules import GateSchedule, PulseSegment
from app.numerics.linalg import DenseOperator, as_operator, dagger, expm_hermitian, frobenius_norm
from app.spin.hamiltonians import build_xy_hamiltonian

logger = logging.getLogger(__name__)


def segment_hamiltonian(segment: PulseSegment) -> DenseOperator:
    """Hamiltonian H_eff with segment evolution e^{−i H_eff t}."""
    return build_xy_hamiltonian(segment.effective_model())


def propagator_at(schedule: GateSchedule, t: float) -> DenseOperator:
    """Unitary of the schedule truncated at time t (clamped to [0, duration])."""
    dim = 2 ** schedule.num_qubits
    u = np.eye(dim, dtype=np.complex128)
    remaining = max(0.0, t)
    for segment in schedule.segments:
        if remaining <= 0.0:
            break
        if segment.num_qubits != schedule.num_qubits:
            raise DimensionMismatch(
                f"Segment acts on {segment.num_qubits} qubits inside a {schedule.num_qubits}-qubit schedule"
            )
        step = min(segment.duration, remaining)
        u = expm_hermitian(segment_hamiltonian(segment), step) @ u
        remaining -= step
    return u


def synthesize(schedule: GateSchedule) -> DenseOperator:
    """Product of segment propagators, later segments multiplying on the left."""
    u = propagator_at(schedule, schedule.duration)
    logger.debug(f"Synthesized {schedule.label} over {len(schedule.segments)} segments, duration {schedule.duration:.6e}s")
    return u


def project_to_logical(
    u: DenseOperator,
    encoding: LogicalEncoding,
    ancilla_state: Optional[np.ndarray] = None,
    leakage_tol: Optional[float] = None,
) -> DenseOperator:
    """
    Logical block ⟨L_i, anc|U|L_j, anc⟩ with the auxiliaries fixed.

    Args:
        u: unitary on the full register.
        encoding: the logical layout of the register.
        ancilla_state: auxiliary state; the ground state |1…1⟩ when omitted.
        leakage_tol: bound on ‖M†M − I‖_F (settings.LEAKAGE_TOL by default).

    Raises:
        LeakageDetected: the block is not unitary, i.e. U does not map the
            logical subspace onto itself.
    """
    u = as_operator(u)
    if u.shape[0] != 2 ** encoding.num_qubits:
        raise DimensionMismatch(
            f"Operator of dimension {u.shape[0]} for a {encoding.num_qubits}-qubit encoding"
        )
    tol = settings.LEAKAGE_TOL if leakage_tol is None else leakage_tol
    v = encoding.isometry(ancilla_state)
    block = dagger(v) @ u @ v
    leakage = frobenius_norm(dagger(block) @ block - np.eye(block.shape[0]))
    if leakage > tol:
        raise LeakageDetected(f"Logical block deviates from unitarity by {leakage:.3e} (tolerance {tol:.1e})")
    return block


def logical_action(schedule: GateSchedule, ancilla_state: Optional[np.ndarray] = None) -> DenseOperator:
    return project_to_logical(synthesize(schedule), schedule.encoding, ancilla_state)
