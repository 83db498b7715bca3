"""
Dense complex linear algebra on small Hilbert spaces.

Operators are plain complex ``numpy`` arrays. Hermitian eigensolves go
through ``scipy.linalg.eigh`` and every matrix exponential of a Hermitian
generator is built from that eigendecomposition, so the result is unitary
to rounding regardless of how large ``‖H‖·t`` is.
"""
from functools import reduce
from typing import Optional, Tuple

import logging

import numpy as np
import scipy.linalg
from numpy.typing import NDArray

from app.core.config import settings
from app.core.errors import ConvergenceFailure, DimensionMismatch, NotHermitian

logger = logging.getLogger(__name__)

DenseOperator = NDArray[np.complex128]
StateVector = NDArray[np.complex128]


def as_operator(matrix) -> DenseOperator:
    """Coerce to a square complex matrix, raising DimensionMismatch otherwise."""
    op = np.asarray(matrix, dtype=np.complex128)
    if op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise DimensionMismatch(f"Expected a square matrix, got shape {op.shape}")
    return op


def dagger(matrix: DenseOperator) -> DenseOperator:
    return np.conj(matrix).T


def commutator(a: DenseOperator, b: DenseOperator) -> DenseOperator:
    return a @ b - b @ a


def frobenius_norm(matrix: DenseOperator) -> float:
    return float(np.linalg.norm(matrix, "fro"))


def hermiticity_defect(h: DenseOperator) -> float:
    """Relative deviation ‖H − H†‖_F / ‖H‖_F (0 for the zero matrix)."""
    scale = frobenius_norm(h)
    if scale == 0.0:
        return 0.0
    return frobenius_norm(h - dagger(h)) / scale


def check_hermitian(h: DenseOperator, tol: Optional[float] = None) -> None:
    tol = settings.HERMITIAN_TOL if tol is None else tol
    defect = hermiticity_defect(h)
    if defect > tol:
        raise NotHermitian(f"Operator is not Hermitian: relative defect {defect:.3e} > {tol:.1e}")


def eig_hermitian(h, tol: Optional[float] = None) -> Tuple[NDArray[np.float64], DenseOperator]:
    """
    Eigendecomposition of a Hermitian matrix.

    Args:
        h: square Hermitian matrix.
        tol: relative Hermiticity tolerance (defaults to settings.HERMITIAN_TOL).

    Returns:
        (eigenvalues ascending, orthonormal eigenvector columns)

    Raises:
        NotHermitian: ‖H − H†‖_F exceeds tol·‖H‖_F.
        ConvergenceFailure: the LAPACK driver did not converge.
    """
    h = as_operator(h)
    check_hermitian(h, tol)
    # Symmetrize so rounding-level anti-Hermitian parts never reach LAPACK
    h = 0.5 * (h + dagger(h))
    try:
        evals, evecs = scipy.linalg.eigh(h)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as e:
        logger.error(f"Hermitian eigensolve failed for dimension {h.shape[0]}: {e}", exc_info=True)
        raise ConvergenceFailure(str(e)) from e
    return evals, evecs


def expm_from_eig(evals: NDArray[np.float64], evecs: DenseOperator, t: float) -> DenseOperator:
    """e^{−iHt} from a precomputed eigendecomposition of H."""
    return (evecs * np.exp(-1j * evals * t)) @ dagger(evecs)


def expm_hermitian(h, t: float, tol: Optional[float] = None) -> DenseOperator:
    """Unitary e^{−iHt}; negative t gives the inverse."""
    h = as_operator(h)
    if t == 0.0:
        return np.eye(h.shape[0], dtype=np.complex128)
    evals, evecs = eig_hermitian(h, tol)
    return expm_from_eig(evals, evecs, t)


def kron(*operators: DenseOperator) -> DenseOperator:
    """Kronecker product, first factor most significant."""
    if not operators:
        return np.ones((1, 1), dtype=np.complex128)
    return reduce(np.kron, [np.asarray(op, dtype=np.complex128) for op in operators])


def unitarity_defect(u: DenseOperator) -> float:
    """‖U†U − I‖_F."""
    u = np.asarray(u, dtype=np.complex128)
    return frobenius_norm(dagger(u) @ u - np.eye(u.shape[1], dtype=np.complex128))


def is_unitary(u: DenseOperator, tol: float = 1e-10) -> bool:
    return unitarity_defect(u) <= tol
