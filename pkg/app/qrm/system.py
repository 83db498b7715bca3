"""
Tunably coupled QRM sites.

Every site is reduced to its kept eigenstates; the register is their
tensor product (site 0 most significant). Drives are parametric hoppings
J cos(ωt + φ)(a† + a)_a (a† + a)_b between two sites.
"""
from typing import List, Optional, Sequence, Tuple

import logging
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.core.config import settings
from app.core.constants import MAX_TRUNCATED_DIMENSION, QRM_OMEGA_Q_HIGH, QRM_OMEGA_Q_LOW
from app.core.errors import DimensionMismatch, DimensionOverflow, IndexOutOfRange
from app.numerics.linalg import DenseOperator, eig_hermitian, kron
from app.numerics.propagation import SplitHamiltonian
from app.qrm.site import QrmEigenbasis, QrmSite, diagonalize_qrm, project_hopping_operator

logger = logging.getLogger(__name__)

# Registers up to this size change basis with one dense matrix instead of per-site contractions
_DENSE_TRANSFORM_LIMIT = 256


class HoppingDrive(BaseModel):
    model_config = ConfigDict(frozen=True)

    pair: Tuple[int, int]
    J: float = 0.0
    omega_drive: float = Field(default=0.0, ge=0.0)
    phi: float = 0.0

    @model_validator(mode="after")
    def _distinct_sites(self):
        if self.pair[0] == self.pair[1]:
            raise ValueError(f"Hopping pair must join two different sites, got {self.pair}")
        if not math.isfinite(self.J):
            raise ValueError("J must be finite")
        return self

    def coefficient(self, t: float) -> float:
        return self.J * math.cos(self.omega_drive * t + self.phi)


def default_sites(num_sites: int, omega_q_high: float = QRM_OMEGA_Q_HIGH, omega_q_low: float = QRM_OMEGA_Q_LOW, **site_fields) -> List[QrmSite]:
    """Register with qubit frequencies alternating high / low along the chain."""
    return [
        QrmSite(omega_q=omega_q_high if index % 2 == 0 else omega_q_low, **site_fields)
        for index in range(num_sites)
    ]


class CoupledQrmSystem:
    def __init__(
        self,
        sites: Sequence[QrmSite],
        drives: Sequence[HoppingDrive] = (),
        kept_levels: Optional[int] = None,
        interaction_frame: bool = False,
    ):
        if not sites:
            raise ValueError("At least one QRM site is required")
        self.sites: Tuple[QrmSite, ...] = tuple(sites)
        self.kept_levels = kept_levels or settings.QRM_KEPT_LEVELS
        self.interaction_frame = interaction_frame
        for drive in drives:
            for s in drive.pair:
                if not 0 <= s < len(self.sites):
                    raise IndexOutOfRange(f"Drive site {s} outside a {len(self.sites)}-site system")
        self.drives: Tuple[HoppingDrive, ...] = tuple(drives)
        self.bases: Tuple[QrmEigenbasis, ...] = tuple(diagonalize_qrm(s, self.kept_levels) for s in self.sites)
        self.hopping: Tuple[DenseOperator, ...] = tuple(project_hopping_operator(b) for b in self.bases)

    @property
    def num_sites(self) -> int:
        return len(self.sites)

    @property
    def dimension(self) -> int:
        return self.kept_levels ** self.num_sites

    def splitting(self, site: int) -> float:
        return self.bases[site].effective_qubit_splitting

    def register(self, sites: Optional[Sequence[int]] = None) -> "SiteRegister":
        return SiteRegister(self, tuple(range(self.num_sites)) if sites is None else tuple(sites))


def _embed_site(ops: Sequence[np.ndarray], site: int, op: np.ndarray) -> List[np.ndarray]:
    factors = list(ops)
    factors[site] = op
    return factors


def build_coupled_hamiltonian(system: CoupledQrmSystem, t: float) -> DenseOperator:
    """
    Dense Hamiltonian in the truncated product eigenbasis: summed site
    energies plus Σ J cos(ωt + φ) X_a X_b. In the interaction frame the
    static part is removed and the hopping is rotated by e^{iH₀t}.

    Raises:
        DimensionOverflow: truncated dimension above 1296.
    """
    if system.dimension > MAX_TRUNCATED_DIMENSION:
        raise DimensionOverflow(
            f"Truncated dimension {system.dimension} exceeds {MAX_TRUNCATED_DIMENSION}"
        )
    reg = system.register()
    identities = [np.eye(b.kept_levels, dtype=np.complex128) for b in system.bases]
    h = np.zeros((system.dimension, system.dimension), dtype=np.complex128)
    for drive in system.drives:
        a, b = drive.pair
        factors = _embed_site(_embed_site(identities, a, system.hopping[a]), b, system.hopping[b])
        h += drive.coefficient(t) * kron(*factors)
    if system.interaction_frame:
        phases = np.exp(1j * reg.static_energies * t)
        return phases[:, None] * h * np.conj(phases)[None, :]
    return h + np.diag(reg.static_energies).astype(np.complex128)


class SiteRegister:
    """
    Product of the kept eigenbases of a subset of sites, with the hopping
    operators diagonalized per site so that all drives share one kick basis.
    """

    def __init__(self, system: CoupledQrmSystem, sites: Tuple[int, ...]):
        if len(set(sites)) != len(sites):
            raise ValueError(f"Duplicate sites in register {sites}")
        for s in sites:
            if not 0 <= s < system.num_sites:
                raise IndexOutOfRange(f"Site {s} outside a {system.num_sites}-site system")
        self.system = system
        self.sites = sites
        self.levels = tuple(system.bases[s].kept_levels for s in sites)
        self.dimension = int(np.prod(self.levels))
        self.static_energies = self._summed(tuple(system.bases[s].energies for s in sites))
        self._x_values = []
        self._x_vectors = []
        for s in sites:
            values, vectors = eig_hermitian(system.hopping[s])
            self._x_values.append(values)
            self._x_vectors.append(vectors)
        self._dense_forward = None
        if self.dimension <= _DENSE_TRANSFORM_LIMIT:
            # Columns of the kick basis; forward map is its adjoint
            self._dense_forward = kron(*self._x_vectors).conj().T

    def _summed(self, per_site: Tuple[np.ndarray, ...]) -> np.ndarray:
        total = np.zeros(1)
        for values in per_site:
            total = np.add.outer(total, values).ravel()
        return total

    def local_index(self, site: int) -> int:
        try:
            return self.sites.index(site)
        except ValueError as e:
            raise IndexOutOfRange(f"Site {site} is not part of register {self.sites}") from e

    def _per_site(self, psi: np.ndarray, adjoint: bool) -> np.ndarray:
        cols = psi.shape[1]
        tensor = psi.reshape(self.levels + (cols,))
        for axis, vectors in enumerate(self._x_vectors):
            op = vectors.conj().T if adjoint else vectors
            tensor = np.moveaxis(np.tensordot(op, tensor, axes=([1], [axis])), 0, axis)
        return tensor.reshape(self.dimension, cols)

    def to_kick_basis(self, psi: np.ndarray) -> np.ndarray:
        if self._dense_forward is not None:
            return self._dense_forward @ psi
        return self._per_site(psi, adjoint=True)

    def from_kick_basis(self, psi: np.ndarray) -> np.ndarray:
        if self._dense_forward is not None:
            return self._dense_forward.conj().T @ psi
        return self._per_site(psi, adjoint=False)

    def drive_weights(self, drive: HoppingDrive) -> np.ndarray:
        """Eigenvalues of X_a X_b on the kick basis, flattened."""
        a, b = (self.local_index(s) for s in drive.pair)
        per_site = [np.ones(n) for n in self.levels]
        per_site[a] = self._x_values[a]
        per_site[b] = self._x_values[b]
        weights = np.ones(1)
        for values in per_site:
            weights = np.multiply.outer(weights, values).ravel()
        return weights

    def split_hamiltonian(self, drives: Sequence[HoppingDrive]) -> SplitHamiltonian:
        active = [d for d in drives if d.J != 0.0]
        weights = [self.drive_weights(d) for d in active]
        zeros = np.zeros(self.dimension)

        def kick_energies(t: float) -> np.ndarray:
            total = zeros
            for drive, w in zip(active, weights):
                total = total + drive.coefficient(t) * w
            return total

        return SplitHamiltonian(
            static_energies=self.static_energies,
            to_kick_basis=self.to_kick_basis,
            from_kick_basis=self.from_kick_basis,
            kick_energies=kick_energies,
        )

    def product_index(self, levels: Sequence[int]) -> int:
        if len(levels) != len(self.levels):
            raise DimensionMismatch(f"{len(levels)} levels for a {len(self.levels)}-site register")
        return int(np.ravel_multi_index(tuple(levels), self.levels))

    def effective_manifold_mask(self) -> np.ndarray:
        """True where every site sits in E0 or E1."""
        grids = np.indices(self.levels).reshape(len(self.levels), -1)
        return np.all(grids <= 1, axis=0)
