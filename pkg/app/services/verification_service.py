"""
Spin-layer verification suites: catalog gate agreement and the protection
certificates (holonomy, decoupling, decoherence-free encoding).
"""
from typing import List, Optional

import logging

import numpy as np

from app.core.errors import ToolkitError
from app.logical.catalog import DriveRates, gate_catalog, standard_gate
from app.logical.encoding import SINGLE_QUBIT_ENCODING, TWO_QUBIT_ENCODING, LogicalEncoding
from app.logical.schedules import GateSchedule
from app.logical.synthesis import project_to_logical, segment_hamiltonian, synthesize
from app.numerics.linalg import expm_hermitian, frobenius_norm, unitarity_defect
from app.numerics.metrics import phase_aware_distance
from app.protection.decoupling import dd_commutators, dd_suppression_slopes, decoupling_group
from app.protection.dephasing import collective_dephasing_invariance, dephasing_infidelity, logical_test_states
from app.protection.holonomy import check_parallel_transport, check_subspace_invariance
from app.protection.subspaces import holonomy_subspace, holonomy_subspaces
from app.schemas.common import Check, GateRecord
from app.schemas.config import ExperimentConfig
from app.spin.hamiltonians import build_xy_hamiltonian, h1_params, h2_params, h3_params, h4_params
from app.spin.operators import SIGMA_Z, embed
from app.utils.parallel import map_ordered

logger = logging.getLogger(__name__)


def drive_rates(config: ExperimentConfig) -> DriveRates:
    spin = config.spin
    return DriveRates(omega=spin.omega, omega_prime=spin.omega_prime, omega12=spin.omega12, omega34=spin.omega34)


class GateVerificationService:
    """Synthesizes every selected catalog gate and compares it with its target."""

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.rates = drive_rates(config)

    def verify_gate(self, kind) -> GateRecord:
        name = kind.value
        tolerance = self.config.tolerances.gate
        try:
            gate = standard_gate(kind)
            schedule, expected = gate_catalog(gate, self.rates)
            u = synthesize(schedule)
            # Leakage is measured below against its own tolerance instead of raising here
            block = project_to_logical(u, schedule.encoding, leakage_tol=np.inf)
            distance = phase_aware_distance(block, expected, gate.global_phase)
            leakage = check_subspace_invariance(u, holonomy_subspace(schedule.encoding, 1))
            metrics = {
                "phase_aware_distance": distance,
                "endpoint_leakage": leakage,
                "unitarity_defect": unitarity_defect(u),
                "duration_seconds": schedule.duration,
            }
            checks = [
                Check(metric="phase_aware_distance", value=distance, tolerance=tolerance),
                Check(metric="endpoint_leakage", value=leakage, tolerance=self.config.tolerances.holonomy),
            ]
            record = GateRecord(name=name, metrics=metrics, checks=checks)
        except ToolkitError as e:
            logger.error(f"Gate {name} could not be verified: {e}", exc_info=True)
            record = GateRecord(name=name, error=f"{type(e).__name__}: {e}")
        logger.info(f"Gate {name}: {'pass' if record.passed else 'FAIL'}")
        return record

    def run(self) -> List[GateRecord]:
        return map_ordered(self.verify_gate, self.config.gates)


class ProtectionVerificationService:
    """
    Holonomy certificates per selected gate and subspace, decoupling
    commutators and suppression slopes, and collective-dephasing immunity.
    """

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.rates = drive_rates(config)
        self.tolerances = config.tolerances

    def identity_baseline(self) -> GateRecord:
        subspace = holonomy_subspace(SINGLE_QUBIT_ENCODING, 1)
        residual = check_subspace_invariance(np.eye(subspace.dimension, dtype=np.complex128), subspace)
        return GateRecord(
            name="identity",
            metrics={"subspace_invariance": residual},
            checks=[Check(metric="subspace_invariance", value=residual, tolerance=self.tolerances.holonomy)],
        )

    def _perturbation(self, encoding: LogicalEncoding) -> Optional[np.ndarray]:
        strength = self.config.protection.inject_detuning
        if strength == 0.0:
            return None
        target = encoding.ancillas[0] if encoding.ancillas else 0
        return strength * self.rates.omega * embed(SIGMA_Z, target, encoding.num_qubits)

    def holonomy_record(self, kind) -> GateRecord:
        name = f"holonomy:{kind.value}"
        try:
            schedule, _ = gate_catalog(standard_gate(kind), self.rates)
            perturbation = self._perturbation(schedule.encoding)
            u = synthesize(schedule)
            if perturbation is not None:
                u = self._perturbed_unitary(schedule, perturbation)
            metrics, checks = {}, []
            for subspace in holonomy_subspaces(schedule.encoding):
                invariance = check_subspace_invariance(u, subspace)
                transport = check_parallel_transport(
                    schedule, subspace, self.config.protection.samples, perturbation
                )
                metrics[f"invariance_{subspace.label}"] = invariance
                metrics[f"parallel_transport_{subspace.label}"] = transport
                checks.append(Check(metric=f"invariance_{subspace.label}", value=invariance, tolerance=self.tolerances.holonomy))
                checks.append(Check(metric=f"parallel_transport_{subspace.label}", value=transport, tolerance=self.tolerances.holonomy))
            return GateRecord(name=name, metrics=metrics, checks=checks)
        except ToolkitError as e:
            logger.error(f"Holonomy check for {kind.value} failed: {e}", exc_info=True)
            return GateRecord(name=name, error=f"{type(e).__name__}: {e}")

    @staticmethod
    def _perturbed_unitary(schedule: GateSchedule, perturbation: np.ndarray) -> np.ndarray:
        u = np.eye(2 ** schedule.num_qubits, dtype=np.complex128)
        for segment in schedule.segments:
            u = expm_hermitian(segment_hamiltonian(segment) + perturbation, segment.duration) @ u
        return u

    def dd_commutator_record(self) -> GateRecord:
        rates = self.rates
        hamiltonians = {
            "H1": build_xy_hamiltonian(h1_params(np.pi / 4, rates.omega)),
            "H2": build_xy_hamiltonian(h2_params(rates.omega12)),
            "H3": build_xy_hamiltonian(h3_params(-np.pi / 4, rates.omega_prime)),
            "H4": build_xy_hamiltonian(h4_params(rates.omega34)),
        }
        metrics, checks = {}, []
        for label, h in hamiltonians.items():
            group = decoupling_group(int(np.log2(h.shape[0])))
            # relative to ‖H‖_F
            worst = max(dd_commutators(h, group)) / frobenius_norm(h)
            metrics[f"commutator_{label}"] = worst
            checks.append(Check(metric=f"commutator_{label}", value=worst, tolerance=self.tolerances.dd_commutator))
        return GateRecord(name="dd_commutators", metrics=metrics, checks=checks)

    def dd_suppression_record(self) -> GateRecord:
        # Dimensionless units: Ω = 1, static σz error of unit strength on qubit 1
        h_sys = build_xy_hamiltonian(h1_params(np.pi / 4, 1.0))
        h_err = embed(SIGMA_Z, 1, 3)
        fit = dd_suppression_slopes(h_sys, h_err, 1.0, self.config.protection.dd_periods, decoupling_group(3))
        tol = self.tolerances
        with_dev = abs(fit.slope_with_dd - tol.dd_slope_with)
        without_dev = abs(fit.slope_without_dd - tol.dd_slope_without)
        return GateRecord(
            name="dd_suppression",
            metrics={"slope_with_dd": fit.slope_with_dd, "slope_without_dd": fit.slope_without_dd},
            checks=[
                Check(metric="slope_with_dd_deviation", value=with_dev, tolerance=tol.dd_slope_band),
                Check(metric="slope_without_dd_deviation", value=without_dev, tolerance=tol.dd_slope_band),
            ],
        )

    def dfs_record(self, label: str, encoding: LogicalEncoding) -> GateRecord:
        count = self.config.protection.dephasing_phases
        rng = np.random.default_rng(self.config.seed)
        phases = rng.uniform(-10.0, 10.0, count)
        states = logical_test_states(encoding.logical_dim, num_random=count, seed=self.config.seed)
        worst = max(collective_dephasing_invariance(encoding, float(phi), states) for phi in phases)
        # Independent dephasing of one encoded qubit as the unprotected contrast
        single = [0.0] * encoding.num_qubits
        single[encoding.pairs[0][0]] = float(phases[0])
        contrast = dephasing_infidelity(encoding, single, states)
        return GateRecord(
            name=f"dfs:{label}",
            metrics={"collective_max_infidelity": worst, "independent_max_infidelity": contrast},
            checks=[Check(metric="collective_max_infidelity", value=worst, tolerance=self.tolerances.dfs)],
        )

    def run(self) -> List[GateRecord]:
        records = [self.identity_baseline()]
        records.extend(map_ordered(self.holonomy_record, self.config.gates))
        records.append(self.dd_commutator_record())
        records.append(self.dd_suppression_record())
        records.append(self.dfs_record("single", SINGLE_QUBIT_ENCODING))
        records.append(self.dfs_record("two", TWO_QUBIT_ENCODING))
        failed = [r.name for r in records if not r.passed]
        logger.info(f"Protection suite: {len(records) - len(failed)}/{len(records)} records pass; failed: {failed}")
        return records
