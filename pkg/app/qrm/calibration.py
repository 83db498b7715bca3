"""
Drive calibration: choose (ω, φ, J) of a parametric hopping so that the
two effective qubits exchange an excitation at a target rate Ω.

ω is the difference of the two effective-qubit splittings (static drive for
identical sites); φ ∈ {0, π} fixes the sign of the effective coupling; J
starts from the rotating-wave estimate and is refined by bisection on the
population transferred |E1,E0⟩ → |E0,E1⟩ after a quarter exchange period.
"""
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import logging
import math

import numpy as np

from app.core.config import settings
from app.core.errors import CalibrationFailed
from app.logical.schedules import PulseSegment
from app.numerics.propagation import propagate_split
from app.qrm.site import QrmSite, diagonalize_qrm, effective_matrix_element
from app.qrm.system import CoupledQrmSystem, HoppingDrive
from app.utils.retry import BracketMiss, retry_with_widening

logger = logging.getLogger(__name__)

RELATIVE_J_TOLERANCE = 1e-4
MIN_DETECTABLE_TRANSFER = 0.05
# Relative splitting difference below which two sites count as identical
RESONANT_SITES = 1e-9


def _drive_frequency(site_a: QrmSite, site_b: QrmSite, kept: int) -> float:
    da = diagonalize_qrm(site_a, kept).effective_qubit_splitting
    db = diagonalize_qrm(site_b, kept).effective_qubit_splitting
    detuning = abs(da - db)
    return 0.0 if detuning <= RESONANT_SITES * max(da, db) else detuning


def _transfer_probability(system: CoupledQrmSystem, drive: HoppingDrive, duration: float, time_step: float) -> float:
    register = system.register(drive.pair)
    initial = np.zeros(register.dimension, dtype=np.complex128)
    initial[register.product_index((1, 0))] = 1.0
    steps = max(1, math.ceil(duration / time_step))
    final = propagate_split(register.split_hamiltonian([drive]), initial, 0.0, duration, steps)
    return float(abs(final[register.product_index((0, 1))]) ** 2)


@lru_cache(maxsize=128)
def _calibrate_pair(site_a: QrmSite, site_b: QrmSite, kept: int, target_omega: float, time_step: float) -> HoppingDrive:
    system = CoupledQrmSystem([site_a, site_b], kept_levels=kept)
    omega_drive = _drive_frequency(site_a, site_b, kept)
    m_a = effective_matrix_element(system.bases[0])
    m_b = effective_matrix_element(system.bases[1])
    if m_a == 0.0 or m_b == 0.0:
        raise CalibrationFailed("Effective qubit has no hopping matrix element; exchange cannot be activated")
    phi = 0.0 if m_a * m_b > 0 else math.pi
    rwa_factor = 2.0 if omega_drive > 0.0 else 1.0
    estimate = rwa_factor * target_omega / abs(m_a * m_b)
    quarter = math.pi / (4.0 * target_omega)

    def transfer(j: float) -> float:
        drive = HoppingDrive(pair=(0, 1), J=j, omega_drive=omega_drive, phi=phi)
        return _transfer_probability(system, drive, quarter, time_step)

    def bracket(attempt: int) -> Tuple[float, float]:
        lo = estimate * 0.5 ** (attempt + 1)
        hi = estimate * (1.0 + 0.5 * (attempt + 1))
        p_lo, p_hi = transfer(lo), transfer(hi)
        if max(p_lo, p_hi) < MIN_DETECTABLE_TRANSFER:
            raise CalibrationFailed(
                f"No exchange detected (transfer {p_hi:.2e} at J={hi:.4e}); drive is off resonance"
            )
        if not p_lo < 0.5 <= p_hi:
            raise BracketMiss(f"Transfer {p_lo:.3f}..{p_hi:.3f} does not bracket 1/2 in J∈[{lo:.4e}, {hi:.4e}]")
        return lo, hi

    try:
        lo, hi = retry_with_widening(bracket)
    except BracketMiss as e:
        raise CalibrationFailed(f"Calibration bracket never enclosed the target: {e}") from e

    while hi - lo > RELATIVE_J_TOLERANCE * 0.5 * (hi + lo):
        mid = 0.5 * (lo + hi)
        if transfer(mid) < 0.5:
            lo = mid
        else:
            hi = mid
    j = 0.5 * (lo + hi)
    logger.info(
        f"Calibrated hopping: ω_drive={omega_drive:.6e} rad/s, φ={phi:.3f}, "
        f"J={j:.6e} rad/s (estimate {estimate:.6e}, ratio {j / estimate:.4f})"
    )
    return HoppingDrive(pair=(0, 1), J=j, omega_drive=omega_drive, phi=phi)


def calibrate_drive(
    system: CoupledQrmSystem,
    pair: Tuple[int, int],
    target_omega: float,
    time_step: Optional[float] = None,
) -> HoppingDrive:
    """
    Hopping drive that realizes an effective exchange of rate target_omega
    between the effective qubits of `pair`.

    Raises:
        CalibrationFailed: no exchange oscillation is observed.
    """
    a, b = pair
    if target_omega == 0.0:
        omega_drive = _drive_frequency(system.sites[a], system.sites[b], system.kept_levels)
        return HoppingDrive(pair=pair, J=0.0, omega_drive=omega_drive, phi=0.0)
    if target_omega < 0:
        raise ValueError(f"target_omega must be non-negative, got {target_omega}")
    time_step = time_step or settings.QRM_TIME_STEP
    reference = _calibrate_pair(system.sites[a], system.sites[b], system.kept_levels, float(target_omega), float(time_step))
    return reference.model_copy(update={"pair": (a, b)})


class DriveCalibrator:
    """
    Maps spin-layer couplings onto hopping drives. Each site pair is
    calibrated once at the reference rate; other strengths scale J linearly
    and negative strengths shift φ by π.
    """

    def __init__(self, system: CoupledQrmSystem, reference_omega: float, time_step: Optional[float] = None):
        self.system = system
        self.reference_omega = reference_omega
        self.time_step = time_step or settings.QRM_TIME_STEP
        self._references: Dict[Tuple[int, int], HoppingDrive] = {}

    def reference(self, pair: Tuple[int, int]) -> HoppingDrive:
        if pair not in self._references:
            self._references[pair] = calibrate_drive(self.system, pair, self.reference_omega, self.time_step)
        return self._references[pair]

    def drive_for(self, pair: Tuple[int, int], strength: float) -> HoppingDrive:
        ref = self.reference(pair)
        phi = ref.phi + (math.pi if strength < 0 else 0.0)
        return ref.model_copy(update={
            "J": ref.J * abs(strength) / self.reference_omega,
            "phi": math.fmod(phi, 2.0 * math.pi),
        })

    def drives_for_segment(self, segment: PulseSegment) -> List[HoppingDrive]:
        model = segment.effective_model()
        return [
            self.drive_for((c.m, c.n), c.strength)
            for c in model.couplings
            if c.strength != 0.0
        ]
