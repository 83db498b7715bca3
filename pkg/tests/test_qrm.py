import math

import numpy as np
import pytest
from pydantic import ValidationError

from app.core.constants import DEFAULT_OMEGA, TWO_PI
from app.core.errors import DimensionMismatch, DimensionOverflow, IndexOutOfRange, TruncationNotConverged
from app.logical.catalog import TABLE_GATES, TWO_QUBIT_GATES, DriveRates, gate_catalog, standard_gate
from app.logical.encoding import SINGLE_QUBIT_ENCODING
from app.logical.schedules import GateSchedule, PulseSegment
from app.numerics.linalg import eig_hermitian, frobenius_norm, hermiticity_defect, unitarity_defect
from app.numerics.propagation import propagate_time_dependent
from app.qrm.calibration import DriveCalibrator, _transfer_probability, calibrate_drive
from app.qrm.simulation import logical_embedding, propagate_window, simulate_physical_gate
from app.qrm.site import QrmSite, diagonalize_qrm, effective_matrix_element, project_hopping_operator, site_hamiltonian
from app.qrm.system import CoupledQrmSystem, HoppingDrive, build_coupled_hamiltonian, default_sites
from app.schemas.config import ExperimentConfig
from app.services.qrm_service import QrmSimulationService
from app.spin.hamiltonians import SpinModel


def toy_site(**fields) -> QrmSite:
    """Dimensionless site that diagonalizes instantly."""
    params = {"omega_c": 1.0, "omega_q": 0.6, "g": 0.05, "fock_cutoff": 10}
    params.update(fields)
    return QrmSite(**params)


class TestSite:
    def test_uncoupled_spectrum(self):
        evals, _ = eig_hermitian(site_hamiltonian(1.0, 0.6, 0.0, 10))
        assert np.allclose(evals[:5], [-0.3, 0.3, 0.7, 1.3, 1.7])

    def test_default_parameters(self):
        basis = diagonalize_qrm(QrmSite(), 5)
        assert basis.energies.shape == (5,)
        assert np.all(np.diff(basis.energies) > 0)
        assert unitarity_defect(basis.vectors) < 1e-10
        assert 0.0 < basis.effective_qubit_splitting < QrmSite().omega_q

    def test_weak_coupling_ladder(self):
        x = project_hopping_operator(diagonalize_qrm(toy_site(g=1e-6), 5))
        assert abs(x[0, 2]) == pytest.approx(1.0, abs=1e-5)
        assert abs(x[1, 3]) == pytest.approx(1.0, abs=1e-5)
        assert abs(x[2, 4]) == pytest.approx(math.sqrt(2.0), abs=1e-5)

    def test_parity_zeroes_the_diagonal(self):
        x = project_hopping_operator(diagonalize_qrm(toy_site(g=0.3), 5))
        assert np.max(np.abs(np.diag(x))) < 1e-10
        assert effective_matrix_element(diagonalize_qrm(toy_site(g=0.3), 5)) != 0.0

    def test_deep_strong_coupling_needs_more_photons(self):
        with pytest.raises(TruncationNotConverged):
            diagonalize_qrm(toy_site(g=3.0), 5)

    def test_kept_levels_bounded_by_cutoff(self):
        with pytest.raises(ValueError):
            diagonalize_qrm(toy_site(), 21)

    def test_cutoff_floor(self):
        with pytest.raises(ValidationError):
            QrmSite(fock_cutoff=5)


class TestCoupledSystem:
    def test_default_sites_alternate(self):
        sites = default_sites(3, omega_q_high=0.9, omega_q_low=0.5, omega_c=1.0, g=0.05, fock_cutoff=10)
        assert [s.omega_q for s in sites] == [0.9, 0.5, 0.9]

    def test_hopping_pair_must_be_distinct(self):
        with pytest.raises(ValidationError):
            HoppingDrive(pair=(1, 1), J=0.1)

    def test_drive_site_checked(self):
        with pytest.raises(IndexOutOfRange):
            CoupledQrmSystem([toy_site(), toy_site()], drives=[HoppingDrive(pair=(0, 2), J=0.1)], kept_levels=3)

    def test_dimension_cap(self):
        system = CoupledQrmSystem([toy_site()] * 5, kept_levels=5)
        with pytest.raises(DimensionOverflow):
            build_coupled_hamiltonian(system, 0.0)

    def test_undriven_hamiltonian_is_diagonal(self):
        system = CoupledQrmSystem([toy_site(), toy_site(omega_q=0.4)], drives=[HoppingDrive(pair=(0, 1), J=0.0)], kept_levels=5)
        h = build_coupled_hamiltonian(system, 0.7)
        assert np.count_nonzero(h - np.diag(np.diag(h))) == 0
        assert np.allclose(np.diag(h).real, system.register().static_energies)

    def test_drive_at_cosine_node_vanishes(self):
        drive = HoppingDrive(pair=(0, 1), J=0.2, omega_drive=1.0, phi=math.pi / 2)
        system = CoupledQrmSystem([toy_site(), toy_site()], drives=[drive], kept_levels=4)
        h = build_coupled_hamiltonian(system, 0.0)
        assert np.allclose(h - np.diag(np.diag(h)), 0.0, atol=1e-15)

    def test_three_site_hamiltonian_is_hermitian(self):
        drives = [HoppingDrive(pair=(0, 1), J=0.03, omega_drive=0.2), HoppingDrive(pair=(1, 2), J=-0.02)]
        system = CoupledQrmSystem([toy_site(), toy_site(omega_q=0.4), toy_site()], drives=drives, kept_levels=5)
        for frame in (False, True):
            h = build_coupled_hamiltonian(CoupledQrmSystem(system.sites, drives, 5, interaction_frame=frame), 1.3)
            assert h.shape == (125, 125)
            assert hermiticity_defect(h) < 1e-12

    def test_register_checks(self):
        system = CoupledQrmSystem([toy_site(), toy_site()], kept_levels=3)
        with pytest.raises(ValueError):
            system.register([0, 0])
        with pytest.raises(IndexOutOfRange):
            system.register([0, 2])
        with pytest.raises(DimensionMismatch):
            system.register().product_index((0,))
        assert int(np.sum(system.register().effective_manifold_mask())) == 4


class TestPropagation:
    @pytest.fixture
    def driven(self):
        drive = HoppingDrive(pair=(0, 1), J=0.02, omega_drive=0.2, phi=0.3)
        system = CoupledQrmSystem([toy_site(), toy_site(omega_q=0.4)], drives=[drive], kept_levels=3, interaction_frame=True)
        return system, drive

    def test_window_matches_dense_interaction_frame(self, driven):
        system, drive = driven
        register = system.register()
        window = propagate_window(register, [drive], np.eye(register.dimension, dtype=np.complex128), 1.0, 6.0, 0.01)
        reference = propagate_time_dependent(lambda t: build_coupled_hamiltonian(system, t), 1.0, 6.0, 500)
        assert frobenius_norm(window - reference) < 1e-6
        assert unitarity_defect(window) < 1e-10

    def test_empty_window_is_identity(self, driven):
        system, drive = driven
        columns = np.eye(system.dimension, dtype=np.complex128)
        assert np.array_equal(propagate_window(system.register(), [drive], columns, 2.0, 2.0, 0.01), columns)


class TestCalibration:
    def test_zero_target_switches_drive_off(self):
        system = CoupledQrmSystem([toy_site(), toy_site(omega_q=0.4)], kept_levels=3)
        drive = calibrate_drive(system, (0, 1), 0.0)
        assert drive.J == 0.0
        assert drive.omega_drive == pytest.approx(abs(system.splitting(0) - system.splitting(1)))

    def test_negative_target_rejected(self):
        system = CoupledQrmSystem([toy_site(), toy_site()], kept_levels=3)
        with pytest.raises(ValueError):
            calibrate_drive(system, (0, 1), -1.0, time_step=0.01)

    def test_identical_sites_use_static_drive(self):
        system = CoupledQrmSystem([QrmSite(), QrmSite()], kept_levels=5)
        target = TWO_PI * 20e6
        drive = calibrate_drive(system, (0, 1), target, time_step=4e-12)
        assert drive.omega_drive == 0.0
        quarter = math.pi / (4.0 * target)
        assert _transfer_probability(system, drive, quarter, 4e-12) == pytest.approx(0.5, abs=1e-3)

    def test_calibrator_scales_linearly(self):
        system = CoupledQrmSystem([QrmSite(), QrmSite()], kept_levels=5)
        target = TWO_PI * 20e6
        calibrator = DriveCalibrator(system, target, time_step=4e-12)
        reference = calibrator.reference((0, 1))
        half = calibrator.drive_for((0, 1), -0.5 * target)
        assert half.J == pytest.approx(0.5 * reference.J)
        assert math.cos(half.phi) == pytest.approx(-math.cos(reference.phi))

    @pytest.mark.slow
    def test_reference_device_exchange_period(self):
        system = CoupledQrmSystem(default_sites(2), kept_levels=5)
        drive = calibrate_drive(system, (0, 1), DEFAULT_OMEGA)
        assert drive.omega_drive == pytest.approx(abs(system.splitting(0) - system.splitting(1)))
        half_period = math.pi / DEFAULT_OMEGA
        assert half_period == pytest.approx(0.25e-6)
        assert _transfer_probability(system, drive, 0.5 * half_period, 2e-12) == pytest.approx(0.5, abs=1e-3)
        assert _transfer_probability(system, drive, half_period, 2e-12) > 0.99


class TestSimulation:
    @pytest.fixture
    def system(self):
        return CoupledQrmSystem([toy_site(), toy_site(omega_q=0.4), toy_site()], kept_levels=4, interaction_frame=True)

    def test_logical_embedding(self, system):
        columns = logical_embedding(GateSchedule(
            label="idle",
            encoding=SINGLE_QUBIT_ENCODING,
            segments=(PulseSegment(model=SpinModel(num_qubits=3), duration=1.0),),
        ), system.register())
        # |1 0 1⟩ ↦ (E0, E1, E0) and |1 1 0⟩ ↦ (E0, E0, E1)
        assert columns[1 * 4, 0] == 1.0
        assert columns[1, 1] == 1.0
        assert np.count_nonzero(columns) == 2

    def test_idle_schedule_is_perfect(self, system):
        schedule = GateSchedule(
            label="idle",
            encoding=SINGLE_QUBIT_ENCODING,
            segments=(PulseSegment(model=SpinModel(num_qubits=3), duration=1.0),),
        )
        result = simulate_physical_gate(system, schedule, trials=5, seed=3, time_step=0.01)
        assert result.mean_fidelity == pytest.approx(1.0, abs=1e-12)
        assert result.mean_leakage == pytest.approx(0.0, abs=1e-12)
        assert [o.trial for o in result.per_trial] == [0, 1, 2, 3, 4]

    def test_site_count_must_match(self):
        system = CoupledQrmSystem([toy_site(), toy_site()], kept_levels=3)
        schedule, _ = gate_catalog(standard_gate("Z"), DriveRates())
        with pytest.raises(DimensionMismatch):
            simulate_physical_gate(system, schedule, trials=1, seed=0)

    def test_trials_must_be_positive(self, system):
        schedule, _ = gate_catalog(standard_gate("Z"), DriveRates())
        with pytest.raises(ValueError):
            simulate_physical_gate(system, schedule, trials=0, seed=0)

    @pytest.mark.slow
    def test_z_gate_on_default_sites(self):
        system = CoupledQrmSystem(default_sites(3), kept_levels=5, interaction_frame=True)
        gate = standard_gate("Z")
        schedule, expected = gate_catalog(gate, DriveRates())
        result = simulate_physical_gate(system, schedule, trials=4, seed=0, expected=expected)
        assert result.mean_fidelity >= 0.999
        assert result.mean_leakage < 0.01


@pytest.mark.slow
class TestReferenceDeviceAcceptance:
    @pytest.mark.parametrize("kind", TABLE_GATES, ids=lambda k: k.value)
    def test_catalog_gate_on_reference_device(self, kind):
        config = ExperimentConfig(gates=[kind], trials=30, qrm={"stability_checks": True})
        record = QrmSimulationService(config).simulate_gate(kind)
        assert record.error is None
        threshold = 0.998 if kind in TWO_QUBIT_GATES else 0.999
        assert record.metrics["mean_fidelity"] >= threshold
        assert record.metrics["mean_leakage"] < 0.01
        assert record.metrics["truncation_shift"] < 1e-4
        assert record.metrics["step_shift"] < 1e-5
        assert len([m for m in record.metrics if m.startswith("trial_")]) == 30
        assert record.passed
