"""
Single-qubit operators and their embedding into N-qubit registers.

Basis convention: |0⟩ = (1, 0), |1⟩ = (0, 1); σ+ = |0⟩⟨1|, σ− = |1⟩⟨0|,
σz = diag(1, −1). Qubit 0 is the most significant Kronecker factor. The
ground state of a spin is |1⟩.
"""
from typing import Dict

import numpy as np

from app.core.errors import IndexOutOfRange
from app.numerics.linalg import DenseOperator, kron

IDENTITY = np.eye(2, dtype=np.complex128)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=np.complex128)
SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=np.complex128)

PAULIS: Dict[str, DenseOperator] = {"I": IDENTITY, "X": SIGMA_X, "Y": SIGMA_Y, "Z": SIGMA_Z}


def check_index(index: int, num_qubits: int) -> None:
    if not 0 <= index < num_qubits:
        raise IndexOutOfRange(f"Qubit index {index} outside register of {num_qubits} qubits")


def embed(operator: DenseOperator, site: int, num_qubits: int) -> DenseOperator:
    """Place a single-qubit operator on `site` of an N-qubit register."""
    check_index(site, num_qubits)
    factors = [IDENTITY] * num_qubits
    factors[site] = operator
    return kron(*factors)


def pauli_string(label: str) -> DenseOperator:
    """Tensor product of Paulis, e.g. "XXI"."""
    try:
        return kron(*(PAULIS[c] for c in label.upper()))
    except KeyError as e:
        raise ValueError(f"Invalid Pauli label {label!r}") from e


def total_sigma_z(num_qubits: int) -> DenseOperator:
    return sum(embed(SIGMA_Z, q, num_qubits) for q in range(num_qubits))


def basis_state(bits, num_qubits: int) -> np.ndarray:
    """Computational basis ket |b_0 b_1 … b_{N−1}⟩."""
    return np.eye(2 ** num_qubits, dtype=np.complex128)[basis_index(bits)]


def basis_index(bits) -> int:
    index = 0
    for b in bits:
        index = (index << 1) | int(b)
    return index
