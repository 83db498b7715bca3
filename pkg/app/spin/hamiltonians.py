"""
XY exchange Hamiltonians H = Σ Ω_mn (σ+^m σ−^n + σ−^m σ+^n) and the named
drive settings used by the gate schedules.
"""
from typing import Tuple

import logging
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.core.errors import IndexOutOfRange
from app.numerics.linalg import DenseOperator, kron
from app.spin.operators import IDENTITY, SIGMA_MINUS, SIGMA_PLUS, check_index

logger = logging.getLogger(__name__)


class XYCoupling(BaseModel):
    """One exchange term Ω_mn (σ+^m σ−^n + h.c.); strength in rad/s, may be negative."""
    model_config = ConfigDict(frozen=True)

    m: int = Field(ge=0)
    n: int = Field(ge=0)
    strength: float

    @model_validator(mode="after")
    def _distinct_sites(self):
        if self.m == self.n:
            raise ValueError(f"Coupling must join two different qubits, got ({self.m}, {self.n})")
        if not math.isfinite(self.strength):
            raise ValueError("Coupling strength must be finite")
        return self

    @property
    def pair(self) -> Tuple[int, int]:
        return (min(self.m, self.n), max(self.m, self.n))


class SpinModel(BaseModel):
    model_config = ConfigDict(frozen=True)

    num_qubits: int = Field(ge=1)
    couplings: Tuple[XYCoupling, ...] = ()

    @field_validator("couplings")
    @classmethod
    def _unique_pairs(cls, couplings: Tuple[XYCoupling, ...]) -> Tuple[XYCoupling, ...]:
        pairs = [c.pair for c in couplings]
        if len(set(pairs)) != len(pairs):
            raise ValueError(f"Duplicate coupling pairs in {pairs}")
        return couplings

    def scaled(self, factor: float) -> "SpinModel":
        """Same coupling graph with every strength multiplied by factor."""
        return SpinModel(
            num_qubits=self.num_qubits,
            couplings=tuple(c.model_copy(update={"strength": factor * c.strength}) for c in self.couplings),
        )

    def remapped(self, qubit_map: Tuple[int, ...], num_qubits: int) -> "SpinModel":
        """Relabel qubit q as qubit_map[q] inside a register of num_qubits."""
        return SpinModel(
            num_qubits=num_qubits,
            couplings=tuple(
                XYCoupling(m=qubit_map[c.m], n=qubit_map[c.n], strength=c.strength) for c in self.couplings
            ),
        )

    def active_qubits(self) -> Tuple[int, ...]:
        return tuple(sorted({q for c in self.couplings if c.strength != 0.0 for q in (c.m, c.n)}))


def _hopping_term(m: int, n: int, num_qubits: int) -> DenseOperator:
    forward = [IDENTITY] * num_qubits
    forward[m], forward[n] = SIGMA_PLUS, SIGMA_MINUS
    term = kron(*forward)
    return term + term.conj().T


def build_xy_hamiltonian(model: SpinModel) -> DenseOperator:
    """
    Dense 2^N × 2^N Hermitian XY Hamiltonian.

    Raises:
        IndexOutOfRange: a coupling index is ≥ N.
    """
    dim = 2 ** model.num_qubits
    h = np.zeros((dim, dim), dtype=np.complex128)
    for c in model.couplings:
        check_index(c.m, model.num_qubits)
        check_index(c.n, model.num_qubits)
        if c.strength != 0.0:
            h += c.strength * _hopping_term(c.m, c.n, model.num_qubits)
    return h


def _check_angle(theta: float) -> None:
    if not math.isfinite(theta):
        raise ValueError(f"Gate angle must be finite, got {theta}")


def _check_rate(name: str, value: float) -> None:
    if not (value > 0 and math.isfinite(value)):
        raise ValueError(f"{name} must be positive and finite, got {value}")


def holonomic_drive(num_qubits: int, control: int, pair: Tuple[int, int], theta: float, omega: float) -> SpinModel:
    """
    Control qubit coupled to both qubits of a pair with mixing angle θ:
    Ω_{c,a} = Ω sin(θ/2), Ω_{c,b} = Ω cos(θ/2).
    """
    _check_angle(theta)
    _check_rate("omega", omega)
    a, b = pair
    for q in (control, a, b):
        if not 0 <= q < num_qubits:
            raise IndexOutOfRange(f"Qubit index {q} outside register of {num_qubits} qubits")
    return SpinModel(
        num_qubits=num_qubits,
        couplings=(
            XYCoupling(m=control, n=a, strength=omega * math.sin(theta / 2.0)),
            XYCoupling(m=control, n=b, strength=omega * math.cos(theta / 2.0)),
        ),
    )


def exchange_drive(num_qubits: int, pair: Tuple[int, int], strength: float) -> SpinModel:
    a, b = pair
    for q in (a, b):
        if not 0 <= q < num_qubits:
            raise IndexOutOfRange(f"Qubit index {q} outside register of {num_qubits} qubits")
    return SpinModel(num_qubits=num_qubits, couplings=(XYCoupling(m=a, n=b, strength=strength),))


def h1_params(theta: float, omega: float) -> SpinModel:
    """Auxiliary A (qubit 0) driving the pair (1, 2) with tan(θ/2) = Ω_A1/Ω_A2."""
    return holonomic_drive(3, 0, (1, 2), theta, omega)


def h2_params(omega12: float) -> SpinModel:
    """Direct exchange inside the pair (1, 2)."""
    _check_rate("omega12", omega12)
    return exchange_drive(3, (1, 2), omega12)


def h3_params(theta_prime: float, omega_prime: float) -> SpinModel:
    """Qubit 2 (index 1) driving the pair (3, 4) with tan(θ'/2) = Ω_23/Ω_24."""
    return holonomic_drive(4, 1, (2, 3), theta_prime, omega_prime)


def h4_params(omega34: float) -> SpinModel:
    """Direct exchange inside the pair (3, 4)."""
    _check_rate("omega34", omega34)
    return exchange_drive(4, (2, 3), omega34)
