"""
Noise sweeps over a magnitude grid for one catalog gate.
"""
from typing import List, Tuple

import logging

import numpy as np

from app.logical.catalog import gate_catalog, standard_gate
from app.noise.channels import HAMILTONIAN_KINDS, NoiseKind
from app.noise.experiments import sweep
from app.schemas.common import Check, GateRecord, SweepResult
from app.schemas.config import ExperimentConfig
from app.services.verification_service import drive_rates

logger = logging.getLogger(__name__)


class NoiseSweepService:
    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.rates = drive_rates(config)

    def physical_magnitudes(self) -> List[float]:
        noise = self.config.noise
        if noise.relative_to_omega and noise.kind in HAMILTONIAN_KINDS:
            return [m * self.rates.omega for m in noise.magnitudes]
        return list(noise.magnitudes)

    def run(self) -> Tuple[List[GateRecord], SweepResult]:
        noise = self.config.noise
        schedule, _ = gate_catalog(standard_gate(noise.gate), self.rates)
        result = sweep(
            schedule,
            noise.kind,
            self.physical_magnitudes(),
            trials=self.config.trials,
            seed=self.config.seed,
            with_dd=noise.with_dd,
            cycles=noise.cycles,
            qubit=noise.qubit,
        )
        return [self._summary(result)], result

    def _summary(self, result: SweepResult) -> GateRecord:
        infidelity = 1.0 - np.asarray(result.fidelities)
        metrics = {
            "points": float(len(result.axis)),
            "max_mean_infidelity": float(np.max(infidelity)),
            "monotone_infidelity": float(bool(np.all(np.diff(infidelity) >= -1e-12))),
        }
        if result.fidelities_dd is not None:
            metrics["max_mean_infidelity_dd"] = float(np.max(1.0 - np.asarray(result.fidelities_dd)))
        checks = []
        zero = [i for i, m in enumerate(result.axis) if m == 0.0]
        if zero:
            metrics["noiseless_infidelity"] = float(infidelity[zero[0]])
            checks.append(Check(metric="noiseless_infidelity", value=float(infidelity[zero[0]]), tolerance=self.config.tolerances.dfs))
        if self.config.noise.kind == NoiseKind.COLLECTIVE_Z:
            checks.append(Check(metric="max_mean_infidelity", value=metrics["max_mean_infidelity"], tolerance=self.config.tolerances.dfs))
        logger.info(f"Noise sweep {result.channel} on {result.gate}: worst mean infidelity {metrics['max_mean_infidelity']:.3e}")
        return GateRecord(name=f"sweep:{result.gate}:{result.channel}", metrics=metrics, checks=checks)
