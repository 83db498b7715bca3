"""
Dual-rail encoding of logical qubits in the decoherence-free span of
physical qubit pairs: |0⟩_L = |0⟩_a|1⟩_b, |1⟩_L = |1⟩_a|0⟩_b. Qubits not in
any pair are auxiliaries, held in a fixed state around each gate.
"""
from itertools import product
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.core.errors import DimensionMismatch
from app.spin.operators import basis_index


class LogicalEncoding(BaseModel):
    model_config = ConfigDict(frozen=True)

    num_qubits: int = Field(ge=2)
    pairs: Tuple[Tuple[int, int], ...]

    @model_validator(mode="after")
    def _disjoint_pairs(self):
        used = [q for pair in self.pairs for q in pair]
        if not self.pairs:
            raise ValueError("At least one encoded pair is required")
        if len(set(used)) != len(used):
            raise ValueError(f"Encoded pairs must be disjoint, got {self.pairs}")
        if any(not 0 <= q < self.num_qubits for q in used):
            raise ValueError(f"Pair index outside register of {self.num_qubits} qubits: {self.pairs}")
        return self

    @property
    def num_logical(self) -> int:
        return len(self.pairs)

    @property
    def logical_dim(self) -> int:
        return 2 ** len(self.pairs)

    @property
    def ancillas(self) -> Tuple[int, ...]:
        used = {q for pair in self.pairs for q in pair}
        return tuple(q for q in range(self.num_qubits) if q not in used)

    @property
    def encoded_qubits(self) -> Tuple[int, ...]:
        return tuple(q for pair in self.pairs for q in pair)

    def physical_index(self, logical_bits: Sequence[int], ancilla_bits: Sequence[int] = ()) -> int:
        """Basis index of the physical ket carrying the given logical and auxiliary bits."""
        if len(logical_bits) != self.num_logical or len(ancilla_bits) != len(self.ancillas):
            raise DimensionMismatch(
                f"Expected {self.num_logical} logical and {len(self.ancillas)} auxiliary bits, "
                f"got {len(logical_bits)} and {len(ancilla_bits)}"
            )
        bits = [0] * self.num_qubits
        for (a, b), bit in zip(self.pairs, logical_bits):
            bits[a], bits[b] = int(bit), 1 - int(bit)
        for q, bit in zip(self.ancillas, ancilla_bits):
            bits[q] = int(bit)
        return basis_index(bits)

    def logical_kets(self, ancilla_bits: Optional[Sequence[int]] = None) -> List[int]:
        """Physical indices of |L_0⟩ … |L_{2^k−1}⟩, first pair most significant."""
        if ancilla_bits is None:
            ancilla_bits = [1] * len(self.ancillas)
        return [self.physical_index(bits, ancilla_bits) for bits in product((0, 1), repeat=self.num_logical)]

    def ground_ancilla(self) -> np.ndarray:
        """All auxiliaries in the ground state |1…1⟩."""
        return self.ancilla_branch(1)

    def ancilla_branch(self, m: int) -> np.ndarray:
        n = len(self.ancillas)
        state = np.zeros(2 ** n, dtype=np.complex128)
        state[basis_index([m] * n) if n else 0] = 1.0
        return state

    def isometry(self, ancilla_state: Optional[np.ndarray] = None) -> np.ndarray:
        """
        V with columns |L_j⟩ ⊗ |ancilla⟩ embedded in the full register
        (shape 2^N × 2^k).
        """
        n_anc = len(self.ancillas)
        if ancilla_state is None:
            ancilla_state = self.ground_ancilla()
        ancilla_state = np.asarray(ancilla_state, dtype=np.complex128).ravel()
        if ancilla_state.shape[0] != 2 ** n_anc:
            raise DimensionMismatch(
                f"Auxiliary state has dimension {ancilla_state.shape[0]}, expected {2 ** n_anc}"
            )
        v = np.zeros((2 ** self.num_qubits, self.logical_dim), dtype=np.complex128)
        for j, bits in enumerate(product((0, 1), repeat=self.num_logical)):
            for a, anc_bits in enumerate(product((0, 1), repeat=n_anc)):
                if ancilla_state[a] != 0:
                    v[self.physical_index(bits, anc_bits), j] += ancilla_state[a]
        return v


SINGLE_QUBIT_ENCODING = LogicalEncoding(num_qubits=3, pairs=((1, 2),))
TWO_QUBIT_ENCODING = LogicalEncoding(num_qubits=4, pairs=((0, 1), (2, 3)))
# (A, 1, 2, 3, 4): one auxiliary serving both pairs
AUXILIARY_TWO_QUBIT_ENCODING = LogicalEncoding(num_qubits=5, pairs=((1, 2), (3, 4)))
