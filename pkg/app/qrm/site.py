"""
Single quantum Rabi model site: ω_c a†a + (ω_q/2)σz + g(a† + a)σx on an
oscillator ⊗ qubit space truncated at `fock_cutoff` photons, reduced to
its lowest eigenstates. The two lowest form the effective qubit.
"""
from dataclasses import dataclass
from functools import lru_cache

import logging

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PositiveFloat

from app.core.config import settings
from app.core.constants import QRM_COUPLING_G, QRM_OMEGA_C, QRM_OMEGA_Q_HIGH
from app.core.errors import TruncationNotConverged
from app.numerics.linalg import DenseOperator, dagger, eig_hermitian, kron
from app.spin.operators import IDENTITY, SIGMA_X, SIGMA_Z

logger = logging.getLogger(__name__)

CONVERGENCE_EXTRA_PHOTONS = 10
CONVERGENCE_RELATIVE_SHIFT = 1e-6


class QrmSite(BaseModel):
    model_config = ConfigDict(frozen=True)

    omega_c: PositiveFloat = QRM_OMEGA_C
    omega_q: PositiveFloat = QRM_OMEGA_Q_HIGH
    g: PositiveFloat = QRM_COUPLING_G
    fock_cutoff: int = Field(default_factory=lambda: settings.QRM_FOCK_CUTOFF, ge=10)


def _ladder(cutoff: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, cutoff, dtype=np.float64)), 1).astype(np.complex128)


def site_hamiltonian(omega_c: float, omega_q: float, g: float, cutoff: int) -> DenseOperator:
    a = _ladder(cutoff)
    fock = np.eye(cutoff, dtype=np.complex128)
    h = omega_c * kron(dagger(a) @ a, IDENTITY)
    h += 0.5 * omega_q * kron(fock, SIGMA_Z)
    h += g * kron(a + dagger(a), SIGMA_X)
    return h


def position_operator(cutoff: int) -> DenseOperator:
    """(a† + a) ⊗ I on the oscillator ⊗ qubit space."""
    a = _ladder(cutoff)
    return kron(a + dagger(a), IDENTITY)


@dataclass(frozen=True)
class QrmEigenbasis:
    site: QrmSite
    kept_levels: int
    energies: np.ndarray  # ascending, rad/s
    vectors: np.ndarray  # columns in the oscillator ⊗ qubit Fock basis

    @property
    def effective_qubit_splitting(self) -> float:
        return float(self.energies[1] - self.energies[0])

    @property
    def fock_cutoff(self) -> int:
        return self.vectors.shape[0] // 2


def _fix_gauge(vectors: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude component is real positive."""
    fixed = vectors.copy()
    for j in range(fixed.shape[1]):
        k = int(np.argmax(np.abs(fixed[:, j])))
        fixed[:, j] *= np.conj(fixed[k, j]) / abs(fixed[k, j])
    return fixed


def _lowest_levels(site: QrmSite, cutoff: int, kept: int):
    evals, evecs = eig_hermitian(site_hamiltonian(site.omega_c, site.omega_q, site.g, cutoff))
    return evals[:kept], evecs[:, :kept]


@lru_cache(maxsize=64)
def diagonalize_qrm(site: QrmSite, kept: int = 5) -> QrmEigenbasis:
    """
    Lowest `kept` eigenpairs of the site Hamiltonian.

    Raises:
        ValueError: kept exceeds the 2·fock_cutoff dimension.
        TruncationNotConverged: energies move by more than 1e−6·ω_c when
            the Fock cutoff grows by 10.
    """
    if not 1 <= kept <= 2 * site.fock_cutoff:
        raise ValueError(f"kept must lie in [1, {2 * site.fock_cutoff}], got {kept}")
    energies, vectors = _lowest_levels(site, site.fock_cutoff, kept)
    check, _ = _lowest_levels(site, site.fock_cutoff + CONVERGENCE_EXTRA_PHOTONS, kept)
    shift = float(np.max(np.abs(check - energies)))
    if shift >= CONVERGENCE_RELATIVE_SHIFT * site.omega_c:
        raise TruncationNotConverged(
            f"QRM levels shifted by {shift / site.omega_c:.3e}·ω_c between cutoffs "
            f"{site.fock_cutoff} and {site.fock_cutoff + CONVERGENCE_EXTRA_PHOTONS}"
        )
    logger.debug(
        f"Diagonalized QRM site (ω_q={site.omega_q:.4e}, g={site.g:.4e}): "
        f"splitting {energies[1] - energies[0]:.6e} rad/s"
    )
    return QrmEigenbasis(site=site, kept_levels=kept, energies=energies, vectors=_fix_gauge(vectors))


def project_hopping_operator(basis: QrmEigenbasis) -> DenseOperator:
    """(a† + a) in the kept eigenbasis, Hermitian kept × kept."""
    x = position_operator(basis.fock_cutoff)
    projected = dagger(basis.vectors) @ x @ basis.vectors
    return 0.5 * (projected + dagger(projected))


def effective_matrix_element(basis: QrmEigenbasis) -> float:
    """M = ⟨E0|(a† + a)|E1⟩; real in the fixed gauge and nonzero by parity."""
    return float(np.real(project_hopping_operator(basis)[0, 1]))
