"""
Closed-form logical actions of the holonomic pulses and the standard gate
matrices they realize. These are the oracles the synthesized schedules are
checked against.
"""
import math

import numpy as np

from app.numerics.linalg import DenseOperator, kron
from app.spin.operators import SIGMA_X, SIGMA_Z

HADAMARD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / math.sqrt(2.0)
S_GATE = np.diag([1.0, 1.0j]).astype(np.complex128)
T_GATE = np.diag([1.0, np.exp(1j * math.pi / 4.0)]).astype(np.complex128)
CZ_GATE = np.diag([1.0, 1.0, 1.0, -1.0]).astype(np.complex128)
CNOT_GATE = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=np.complex128
)


def _check_branch(m: int) -> None:
    if m not in (0, 1):
        raise ValueError(f"Ancilla branch must be 0 or 1, got {m}")


def u1_analytic(theta: float, m: int = 1) -> DenseOperator:
    """(−1)^{m+1} cosθ σz − sinθ σx: a reflection, Hermitian and unitary."""
    _check_branch(m)
    sign = 1.0 if m == 1 else -1.0
    return sign * math.cos(theta) * SIGMA_Z - math.sin(theta) * SIGMA_X


def u2_analytic(theta: float, m: int = 1) -> DenseOperator:
    """e^{i(−1)^m θ σz}."""
    _check_branch(m)
    phase = theta if m == 0 else -theta
    return np.diag([np.exp(1j * phase), np.exp(-1j * phase)]).astype(np.complex128)


def u4_analytic(theta_prime: float) -> DenseOperator:
    """e^{−iθ' σz⊗σz} on the two-logical-qubit basis |00⟩, |01⟩, |10⟩, |11⟩."""
    zz = np.real(np.diag(kron(SIGMA_Z, SIGMA_Z)))
    return np.diag(np.exp(-1j * theta_prime * zz)).astype(np.complex128)
