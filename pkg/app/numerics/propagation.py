"""
Time-ordered propagation for time-dependent Hamiltonians.

Two integrators live here:

* ``propagate_time_dependent``: fourth-order commutator-free Magnus scheme on
  a dense Hamiltonian callback (two exponentials per step, Gauss-Legendre
  nodes). Works for any H(t); cost is two Hermitian eigensolves per step.
* ``propagate_split``: fourth-order triple-jump composition of Strang steps
  for H(t) = H0 + V(t) where H0 is diagonal in the working basis and V(t) is
  diagonal in a fixed "kick" basis. Only state columns are propagated, which
  keeps long physical-layer runs tractable.
"""
from dataclasses import dataclass
from typing import Callable

import logging
import math

import numpy as np
from numpy.typing import NDArray

from app.core.errors import DimensionMismatch
from app.numerics.linalg import DenseOperator, as_operator, expm_hermitian, frobenius_norm

logger = logging.getLogger(__name__)

_SQRT3 = math.sqrt(3.0)
_NODE_EARLY = 0.5 - _SQRT3 / 6.0
_NODE_LATE = 0.5 + _SQRT3 / 6.0
_WEIGHT_MAJOR = 0.25 + _SQRT3 / 6.0
_WEIGHT_MINOR = 0.25 - _SQRT3 / 6.0

_CBRT2 = 2.0 ** (1.0 / 3.0)
_TRIPLE_JUMP = (
    1.0 / (2.0 - _CBRT2),
    -_CBRT2 / (2.0 - _CBRT2),
    1.0 / (2.0 - _CBRT2),
)


def propagate_time_dependent(
    h_of_t: Callable[[float], DenseOperator],
    t0: float,
    t1: float,
    steps: int,
) -> DenseOperator:
    """
    Time-ordered propagator U(t1, t0) for dU/dt = −i H(t) U.

    Each step applies exp(−ih(a₁H₁ + a₂H₂)) then exp(−ih(a₂H₁ + a₁H₂)) with
    H₁, H₂ sampled at the two Gauss-Legendre nodes of the step; the factor
    weighting the earlier node acts first. Global error is O(h⁴).

    Raises:
        DimensionMismatch: H(t) samples change shape.
        ValueError: steps < 1.
    """
    if steps < 1:
        raise ValueError(f"steps must be positive, got {steps}")
    dt = (t1 - t0) / steps
    dim = None
    propagator = None
    for n in range(steps):
        t = t0 + n * dt
        h_early = as_operator(h_of_t(t + _NODE_EARLY * dt))
        h_late = as_operator(h_of_t(t + _NODE_LATE * dt))
        if dim is None:
            dim = h_early.shape[0]
            propagator = np.eye(dim, dtype=np.complex128)
        if h_early.shape[0] != dim or h_late.shape[0] != dim:
            raise DimensionMismatch(
                f"Hamiltonian dimension changed during propagation: expected {dim}, "
                f"got {h_early.shape[0]} / {h_late.shape[0]}"
            )
        first = expm_hermitian(_WEIGHT_MAJOR * h_early + _WEIGHT_MINOR * h_late, dt)
        second = expm_hermitian(_WEIGHT_MINOR * h_early + _WEIGHT_MAJOR * h_late, dt)
        propagator = second @ first @ propagator
    return propagator


def convergence_error(
    h_of_t: Callable[[float], DenseOperator],
    t0: float,
    t1: float,
    steps: int,
) -> float:
    """‖U(steps) − U(2·steps)‖_F, a self-consistency estimate for choosing steps."""
    coarse = propagate_time_dependent(h_of_t, t0, t1, steps)
    fine = propagate_time_dependent(h_of_t, t0, t1, 2 * steps)
    return frobenius_norm(coarse - fine)


@dataclass(frozen=True)
class SplitHamiltonian:
    """
    H(t) = diag(static_energies) + F† diag(kick_energies(t)) F.

    ``to_kick_basis`` applies F to state columns, ``from_kick_basis`` applies F†.
    """
    static_energies: NDArray[np.float64]
    to_kick_basis: Callable[[np.ndarray], np.ndarray]
    from_kick_basis: Callable[[np.ndarray], np.ndarray]
    kick_energies: Callable[[float], NDArray[np.float64]]

    @property
    def dimension(self) -> int:
        return int(self.static_energies.shape[0])


def propagate_split(
    hamiltonian: SplitHamiltonian,
    states: np.ndarray,
    t0: float,
    t1: float,
    steps: int,
) -> np.ndarray:
    """
    Propagate state columns (shape (d, k) or (d,)) from t0 to t1.

    Strang step: half static phase, kick at the step midpoint, half static
    phase; three Strang steps with triple-jump weights make one step of
    fourth order. Every factor is an exact unitary.
    """
    if steps < 1:
        raise ValueError(f"steps must be positive, got {steps}")
    psi = np.array(states, dtype=np.complex128, copy=True)
    squeeze = psi.ndim == 1
    if squeeze:
        psi = psi[:, None]
    if psi.shape[0] != hamiltonian.dimension:
        raise DimensionMismatch(
            f"State dimension {psi.shape[0]} does not match Hamiltonian dimension {hamiltonian.dimension}"
        )

    dt = (t1 - t0) / steps
    energies = hamiltonian.static_energies
    half_phases = {w: np.exp(-0.5j * energies * w * dt)[:, None] for w in set(_TRIPLE_JUMP)}

    t = t0
    for _ in range(steps):
        for w in _TRIPLE_JUMP:
            h = w * dt
            psi *= half_phases[w]
            kicked = hamiltonian.to_kick_basis(psi)
            kicked *= np.exp(-1j * hamiltonian.kick_energies(t + 0.5 * h) * h)[:, None]
            psi = hamiltonian.from_kick_basis(kicked)
            psi *= half_phases[w]
            t += h
    return psi[:, 0] if squeeze else psi
