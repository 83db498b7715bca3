from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from app.logical.encoding import LogicalEncoding
from app.numerics.linalg import DenseOperator


@dataclass(frozen=True)
class Subspace:
    """Span of computational basis kets of an N-qubit register."""
    basis_kets: Tuple[int, ...]
    num_qubits: int
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if len(set(self.basis_kets)) != len(self.basis_kets):
            raise ValueError(f"Duplicate basis kets in {self.basis_kets}")
        if any(not 0 <= k < 2 ** self.num_qubits for k in self.basis_kets):
            raise ValueError(f"Basis ket outside the {self.num_qubits}-qubit register: {self.basis_kets}")

    @property
    def dimension(self) -> int:
        return 2 ** self.num_qubits

    @property
    def rank(self) -> int:
        return len(self.basis_kets)

    @property
    def projector(self) -> DenseOperator:
        p = np.zeros((self.dimension, self.dimension), dtype=np.complex128)
        p[list(self.basis_kets), list(self.basis_kets)] = 1.0
        return p

    def basis(self) -> np.ndarray:
        """Columns |k⟩ for k in basis_kets."""
        return np.eye(self.dimension, dtype=np.complex128)[:, list(self.basis_kets)]


def holonomy_subspace(encoding: LogicalEncoding, m: int) -> Subspace:
    """
    S_m: every auxiliary in |m⟩, encoded pairs spanning the logical DFS.
    Without auxiliaries this is the DFS itself for either m.
    """
    if m not in (0, 1):
        raise ValueError(f"Auxiliary branch must be 0 or 1, got {m}")
    kets = encoding.logical_kets([m] * len(encoding.ancillas))
    label = f"S_{m}" if encoding.ancillas else "DFS"
    return Subspace(basis_kets=tuple(kets), num_qubits=encoding.num_qubits, label=label)


def holonomy_subspaces(encoding: LogicalEncoding) -> Tuple[Subspace, ...]:
    if not encoding.ancillas:
        return (holonomy_subspace(encoding, 1),)
    return (holonomy_subspace(encoding, 0), holonomy_subspace(encoding, 1))
