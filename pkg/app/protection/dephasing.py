"""
Dephasing of dual-rail encoded states.

Collective phases e^{−i(φ/2)Σσz} act as a global phase on every encoded
pair (one excitation per pair), so logical states are untouched; phases
that differ between the qubits of a pair rotate the logical state.
"""
from typing import Optional, Sequence, Tuple

import logging

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from app.core.errors import DimensionMismatch
from app.logical.encoding import LogicalEncoding
from app.numerics.linalg import DenseOperator
from app.numerics.metrics import haar_random_state, state_fidelity
from app.spin.operators import SIGMA_Z, embed

logger = logging.getLogger(__name__)


class NoiseSpec(BaseModel):
    """Static z noise: per-qubit rates (rad/s) or one collective rate."""
    model_config = ConfigDict(frozen=True)

    rates: Tuple[float, ...]
    collective: bool = False

    @field_validator("rates")
    @classmethod
    def _finite(cls, rates):
        if not all(np.isfinite(r) for r in rates):
            raise ValueError("Noise rates must be finite")
        return rates

    def hamiltonian(self, num_qubits: int, qubits: Optional[Sequence[int]] = None) -> DenseOperator:
        """Σ_q r_q σz^q over `qubits` (all qubits by default)."""
        qubits = tuple(range(num_qubits)) if qubits is None else tuple(qubits)
        rates = (self.rates[0],) * len(qubits) if self.collective else self.rates
        if len(rates) != len(qubits):
            raise DimensionMismatch(f"{len(rates)} rates for {len(qubits)} qubits")
        dim = 2 ** num_qubits
        h = np.zeros((dim, dim), dtype=np.complex128)
        for q, rate in zip(qubits, rates):
            h += rate * embed(SIGMA_Z, q, num_qubits)
        return h


def _dephasing_diagonal(num_qubits: int, phases: Sequence[float]) -> np.ndarray:
    """Diagonal of e^{−i Σ_q (φ_q/2) σz^q}."""
    if len(phases) != num_qubits:
        raise DimensionMismatch(f"{len(phases)} phases for {num_qubits} qubits")
    indices = np.arange(2 ** num_qubits)
    total = np.zeros(2 ** num_qubits)
    for q, phi in enumerate(phases):
        bit = (indices >> (num_qubits - 1 - q)) & 1
        total += 0.5 * phi * (1 - 2 * bit)
    return np.exp(-1j * total)


def logical_test_states(logical_dim: int, num_random: int = 20, seed: int = 0) -> np.ndarray:
    """Columns: basis states, the uniform superposition, then Haar-random states."""
    rng = np.random.default_rng(seed)
    columns = [np.eye(logical_dim, dtype=np.complex128)[:, j] for j in range(logical_dim)]
    columns.append(np.ones(logical_dim, dtype=np.complex128) / np.sqrt(logical_dim))
    columns.extend(haar_random_state(logical_dim, rng) for _ in range(num_random))
    return np.stack(columns, axis=1)


def dephasing_infidelity(
    encoding: LogicalEncoding,
    phases: Sequence[float],
    states: Optional[np.ndarray] = None,
) -> float:
    """
    Max state infidelity 1 − |⟨ψ|D|ψ⟩|² over logical states (columns),
    auxiliaries in the ground state, D = e^{−i Σ (φ_q/2) σz^q}.
    """
    if states is None:
        states = logical_test_states(encoding.logical_dim)
    physical = encoding.isometry() @ states
    diag = _dephasing_diagonal(encoding.num_qubits, phases)
    worst = 0.0
    for j in range(physical.shape[1]):
        psi = physical[:, j]
        worst = max(worst, 1.0 - state_fidelity(psi, diag * psi))
    return max(0.0, worst)


def collective_dephasing_invariance(
    encoding: LogicalEncoding,
    phi: float,
    states: Optional[np.ndarray] = None,
) -> float:
    """Max infidelity under the same phase φ on every encoded qubit."""
    encoded = set(encoding.encoded_qubits)
    phases = [phi if q in encoded else 0.0 for q in range(encoding.num_qubits)]
    return dephasing_infidelity(encoding, phases, states)
