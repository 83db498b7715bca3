"""
Fidelity measures and random test states.
"""
from typing import Optional

import numpy as np

from app.core.errors import DimensionMismatch
from app.numerics.linalg import DenseOperator, StateVector, dagger, frobenius_norm


def _same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionMismatch(f"Shape mismatch: {a.shape} vs {b.shape}")


def process_fidelity(target: DenseOperator, actual: DenseOperator, projector: Optional[DenseOperator] = None) -> float:
    """
    |Tr(U_t† U_a)| / d, optionally restricted to the range of a projector.

    With a projector P of rank r the trace is taken over P U_t† U_a P and
    normalized by r.
    """
    _same_shape(target, actual)
    overlap = dagger(target) @ actual
    if projector is None:
        return float(abs(np.trace(overlap)) / target.shape[0])
    rank = float(np.real(np.trace(projector)))
    return float(abs(np.trace(projector @ overlap @ projector)) / rank)


def unitary_error(target: DenseOperator, actual: DenseOperator, projector: Optional[DenseOperator] = None) -> float:
    """
    ‖P(U_t† U_a − e^{iφ}I)P‖_F / √rank with φ the phase of the trace overlap.

    Linear in a small generator error and free of the 1 − F cancellation, so it
    stays accurate down to ~1e−15.
    """
    _same_shape(target, actual)
    overlap = dagger(target) @ actual
    dim = target.shape[0]
    if projector is None:
        projector = np.eye(dim, dtype=np.complex128)
    block = projector @ overlap @ projector
    trace = np.trace(block)
    phase = trace / abs(trace) if abs(trace) > 0 else 1.0
    rank = float(np.real(np.trace(projector)))
    return frobenius_norm(block - phase * projector) / float(np.sqrt(rank))


def phase_aware_distance(actual: DenseOperator, expected: DenseOperator, global_phase: complex = 1.0) -> float:
    """‖g·U_a − U_e‖_F; no phase is optimized away."""
    _same_shape(actual, expected)
    return frobenius_norm(global_phase * actual - expected)


def state_fidelity(target: StateVector, actual: StateVector) -> float:
    """|⟨target|actual⟩|²; actual need not be normalized (lost norm counts as infidelity)."""
    return float(abs(np.vdot(target, actual)) ** 2)


def haar_random_state(dim: int, rng: np.random.Generator) -> StateVector:
    """Haar-distributed pure state from a normalized complex Gaussian."""
    vec = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return vec / np.linalg.norm(vec)


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent generator for one trial, a pure function of (seed, trial)."""
    return np.random.default_rng([int(seed), int(trial)])
