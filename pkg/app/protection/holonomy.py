"""
Certificates for the two holonomy conditions: the computational subspace
returns to itself at the end of the schedule (cyclic evolution) and the
Hamiltonian never acts inside the transported subspace (parallel transport).
"""
from typing import Optional

import logging

import numpy as np

from app.core.errors import DimensionMismatch
from app.logical.schedules import GateSchedule
from app.logical.synthesis import segment_hamiltonian
from app.numerics.linalg import DenseOperator, dagger, eig_hermitian, expm_from_eig, frobenius_norm
from app.protection.subspaces import Subspace

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES = 100


def check_subspace_invariance(u: DenseOperator, subspace: Subspace) -> float:
    """‖(I − P) U P‖_F."""
    if u.shape[0] != subspace.dimension:
        raise DimensionMismatch(f"Operator dimension {u.shape[0]} vs subspace register {subspace.dimension}")
    p = subspace.projector
    return frobenius_norm((np.eye(subspace.dimension) - p) @ u @ p)


def check_parallel_transport(
    schedule: GateSchedule,
    subspace: Subspace,
    samples: int = DEFAULT_SAMPLES,
    perturbation: Optional[DenseOperator] = None,
) -> float:
    """
    Largest parallel-transport residual over a uniform grid of `samples`
    points per segment, relative to ‖H‖_F of that segment.

    Holonomic segments must satisfy P(t) H P(t) = 0 with P(t) = U(t) P U(t)†.
    Conjugating segments rotate the basis inside the subspace, so there only
    the diagonal ⟨ψ_k(t)|H|ψ_k(t)⟩ of the transported basis states must
    vanish. Zero-duration segments contribute nothing.

    Args:
        perturbation: static Hermitian term added to every segment.
    """
    if samples < 2:
        raise ValueError(f"samples must be at least 2, got {samples}")
    if schedule.num_qubits != subspace.num_qubits:
        raise DimensionMismatch(
            f"{schedule.num_qubits}-qubit schedule vs {subspace.num_qubits}-qubit subspace"
        )
    frame = subspace.basis()
    worst = 0.0
    for index, segment in enumerate(schedule.segments):
        if segment.duration == 0.0:
            continue
        h = segment_hamiltonian(segment)
        if perturbation is not None:
            h = h + perturbation
        scale = frobenius_norm(h)
        if scale == 0.0:
            continue
        evals, evecs = eig_hermitian(h)
        for t in np.linspace(0.0, segment.duration, samples):
            psi = expm_from_eig(evals, evecs, t) @ frame
            block = dagger(psi) @ h @ psi
            if segment.conjugating:
                residual = float(np.max(np.abs(np.diag(block))))
            else:
                residual = frobenius_norm(block)
            worst = max(worst, residual / scale)
        frame = expm_from_eig(evals, evecs, segment.duration) @ frame
        logger.debug(f"{schedule.label} segment {index}: running max residual {worst:.3e}")
    return worst
