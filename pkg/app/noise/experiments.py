"""
Noisy gate runs, decoupling-interleaved runs and magnitude sweeps.

Fidelities are state fidelities over seeded Haar-random logical inputs
(auxiliaries in the ground state) against the ideal synthesized gate.
"""
from functools import partial
from typing import Optional, Sequence

import logging

import numpy as np

from app.logical.schedules import GateSchedule
from app.logical.synthesis import synthesize
from app.noise.channels import NoiseChannel, NoiseKind, check_perturbative_bound, noisy_segment_hamiltonians
from app.numerics.linalg import DenseOperator, expm_hermitian
from app.numerics.metrics import haar_random_state, state_fidelity, trial_rng
from app.protection.decoupling import decoupling_group, toggled_evolution
from app.schemas.common import SweepPoint, SweepResult
from app.utils.parallel import map_ordered

logger = logging.getLogger(__name__)


def _bare_evolution(channel: NoiseChannel, schedule: GateSchedule) -> DenseOperator:
    u = np.eye(2 ** schedule.num_qubits, dtype=np.complex128)
    for h, duration in noisy_segment_hamiltonians(channel, schedule):
        u = expm_hermitian(h, duration) @ u
    return u


def _decoupled_evolution(channel: NoiseChannel, schedule: GateSchedule, cycles: int) -> DenseOperator:
    group = decoupling_group(schedule.num_qubits)
    u = np.eye(group.dimension, dtype=np.complex128)
    for h, duration in noisy_segment_hamiltonians(channel, schedule):
        u = toggled_evolution(h, duration, group, cycles) @ u
    return u


def _fidelity_stats(schedule: GateSchedule, ideal: DenseOperator, actual: DenseOperator, trials: int, seed: int):
    isometry = schedule.encoding.isometry()
    fidelities = []
    for trial in range(trials):
        psi = isometry @ haar_random_state(schedule.encoding.logical_dim, trial_rng(seed, trial))
        fidelities.append(state_fidelity(ideal @ psi, actual @ psi))
    return float(np.mean(fidelities)), float(np.min(fidelities))


def _require_trials(trials: int) -> None:
    if trials < 1:
        raise ValueError(f"trials must be positive, got {trials}")


def run_noisy_gate(schedule: GateSchedule, channel: NoiseChannel, trials: int) -> SweepPoint:
    """
    Mean and minimum logical state fidelity of the noisy schedule against
    the noiseless one, trial states drawn from channel.seed.
    """
    _require_trials(trials)
    check_perturbative_bound(channel, schedule)
    ideal = synthesize(schedule)
    mean, worst = _fidelity_stats(schedule, ideal, _bare_evolution(channel, schedule), trials, channel.seed)
    logger.debug(f"{schedule.label} {channel.kind.value}={channel.magnitude:.3e}: mean fidelity {mean:.12f}")
    return SweepPoint(magnitude=channel.magnitude, mean_fidelity=mean, min_fidelity=worst, seed=channel.seed)


def dd_interleaved_gate(schedule: GateSchedule, channel: NoiseChannel, cycles: int, trials: int) -> SweepPoint:
    """
    Same run with every segment split into 4·cycles sub-intervals and ideal
    group pulses interleaved; both the decoupled and the bare fidelities
    are reported.

    Raises:
        ValueError: cycles < 1, or a channel that is not a Hamiltonian term.
    """
    _require_trials(trials)
    if cycles < 1:
        raise ValueError(f"cycles must be at least 1, got {cycles}")
    if not channel.is_hamiltonian:
        raise ValueError(f"Decoupling needs a Hamiltonian-type channel, got {channel.kind.value}")
    check_perturbative_bound(channel, schedule)
    ideal = synthesize(schedule)
    mean, worst = _fidelity_stats(schedule, ideal, _bare_evolution(channel, schedule), trials, channel.seed)
    mean_dd, worst_dd = _fidelity_stats(
        schedule, ideal, _decoupled_evolution(channel, schedule, cycles), trials, channel.seed
    )
    logger.debug(
        f"{schedule.label} {channel.kind.value}={channel.magnitude:.3e}, {cycles} DD cycles: "
        f"fidelity {mean_dd:.12f} with DD, {mean:.12f} without"
    )
    return SweepPoint(
        magnitude=channel.magnitude,
        mean_fidelity=mean,
        min_fidelity=worst,
        mean_fidelity_dd=mean_dd,
        min_fidelity_dd=worst_dd,
        seed=channel.seed,
    )


def _sweep_point(magnitude: float, schedule: GateSchedule, channel: NoiseChannel, trials: int, with_dd: bool, cycles: int) -> SweepPoint:
    point_channel = channel.with_magnitude(magnitude)
    if with_dd:
        return dd_interleaved_gate(schedule, point_channel, cycles, trials)
    return run_noisy_gate(schedule, point_channel, trials)


def sweep(
    schedule: GateSchedule,
    kind: NoiseKind,
    magnitudes: Sequence[float],
    trials: int,
    seed: int = 0,
    with_dd: bool = False,
    cycles: int = 1,
    qubit: Optional[int] = None,
    max_workers: Optional[int] = None,
) -> SweepResult:
    """Fidelity columns over a magnitude grid; points run independently, results in grid order."""
    channel = NoiseChannel(kind=kind, magnitude=0.0, seed=seed, qubit=qubit)
    run = partial(_sweep_point, schedule=schedule, channel=channel, trials=trials, with_dd=with_dd, cycles=cycles)
    points = map_ordered(run, [float(m) for m in magnitudes], max_workers)
    logger.info(f"Sweep {kind.value} on {schedule.label}: {len(points)} points, DD={'on' if with_dd else 'off'}")
    return SweepResult.from_points(kind.value, schedule.label, points)
