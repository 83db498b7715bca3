import math

import numpy as np
import pytest
from pydantic import ValidationError

from app.core.errors import DimensionMismatch, LeakageDetected, UnknownGate
from app.logical.catalog import (
    TABLE_GATES,
    GateKind,
    StandardGate,
    gate_catalog,
    standard_gate,
)
from app.logical.encoding import (
    AUXILIARY_TWO_QUBIT_ENCODING,
    SINGLE_QUBIT_ENCODING,
    TWO_QUBIT_ENCODING,
    LogicalEncoding,
)
from app.logical.schedules import (
    GateSchedule,
    holonomic_pulse,
    remap_schedule,
    schedule_u1,
    schedule_u2,
    schedule_u4,
)
from app.logical.synthesis import logical_action, project_to_logical, propagator_at, synthesize
from app.numerics.linalg import frobenius_norm, unitarity_defect
from app.numerics.metrics import phase_aware_distance
from app.spin.closed_forms import u1_analytic, u2_analytic, u4_analytic
from app.spin.operators import SIGMA_X


def phased_action(kind, rates):
    gate = standard_gate(kind)
    schedule, _ = gate_catalog(gate, rates)
    return gate.global_phase * logical_action(schedule)


class TestEncoding:
    def test_single_qubit_kets(self):
        # (A, a, b) with A in the ground state |1⟩
        assert SINGLE_QUBIT_ENCODING.logical_kets() == [0b101, 0b110]
        assert SINGLE_QUBIT_ENCODING.ancillas == (0,)

    def test_two_qubit_kets_have_no_auxiliary(self):
        assert TWO_QUBIT_ENCODING.ancillas == ()
        assert TWO_QUBIT_ENCODING.logical_kets() == [0b0101, 0b0110, 0b1001, 0b1010]

    def test_isometry_columns_orthonormal(self):
        v = AUXILIARY_TWO_QUBIT_ENCODING.isometry()
        assert v.shape == (32, 4)
        assert np.allclose(v.conj().T @ v, np.eye(4))

    def test_overlapping_pairs_rejected(self):
        with pytest.raises(ValidationError):
            LogicalEncoding(num_qubits=4, pairs=((0, 1), (1, 2)))

    def test_wrong_auxiliary_dimension(self):
        with pytest.raises(DimensionMismatch):
            SINGLE_QUBIT_ENCODING.isometry(np.ones(4))


class TestSchedules:
    def test_u1_duration(self, omega):
        assert schedule_u1(0.3, omega).duration == pytest.approx(2.5e-7, rel=1e-12)

    def test_u2_duration(self, omega):
        # two π/Ω pulses plus two π/(4Ω12) exchanges
        assert schedule_u2(0.3, omega, omega).duration == pytest.approx(6.25e-7, rel=1e-12)

    def test_zero_angle_leaves_first_pair_qubit_idle(self, omega):
        (segment,) = schedule_u1(0.0, omega).segments
        assert segment.model.active_qubits() == (0, 2)

    def test_conjugating_segments_are_marked(self, omega):
        flags = [s.conjugating for s in schedule_u2(0.1, omega, omega).segments]
        assert flags == [True, False, False, True]

    def test_rates_must_be_positive(self, omega):
        with pytest.raises(ValueError):
            schedule_u2(0.1, omega, 0.0)

    def test_register_mismatch_rejected(self, omega):
        with pytest.raises(ValidationError):
            GateSchedule(
                label="bad",
                encoding=TWO_QUBIT_ENCODING,
                segments=(holonomic_pulse(3, 0, (1, 2), 0.2, omega),),
            )

    def test_remap_needs_full_map(self, omega):
        with pytest.raises(DimensionMismatch):
            remap_schedule(schedule_u1(0.2, omega), (0, 1), AUXILIARY_TWO_QUBIT_ENCODING)


class TestSynthesis:
    def test_u1_matches_closed_form(self, omega, theta_grid):
        for theta in theta_grid:
            action = logical_action(schedule_u1(theta, omega))
            assert frobenius_norm(action - u1_analytic(theta)) < 1e-9

    def test_u1_with_excited_auxiliary(self, omega):
        theta = 0.9
        u = synthesize(schedule_u1(theta, omega))
        block = project_to_logical(u, SINGLE_QUBIT_ENCODING, SINGLE_QUBIT_ENCODING.ancilla_branch(0))
        assert frobenius_norm(block - u1_analytic(theta, m=0)) < 1e-9

    @pytest.mark.parametrize("theta", np.linspace(-math.pi, math.pi, 9))
    def test_u2_matches_closed_form(self, omega, theta):
        action = logical_action(schedule_u2(theta, omega, omega))
        assert frobenius_norm(action - u2_analytic(theta)) < 1e-9

    @pytest.mark.parametrize("theta", [-math.pi / 4, 0.3, math.pi / 2])
    def test_u4_matches_closed_form(self, omega, theta):
        action = logical_action(schedule_u4(theta, omega, omega))
        assert frobenius_norm(action - u4_analytic(theta)) < 1e-9

    def test_zero_time_is_identity(self, omega):
        u = propagator_at(schedule_u1(0.4, omega), 0.0)
        assert np.array_equal(project_to_logical(u, SINGLE_QUBIT_ENCODING), np.eye(2))

    def test_x_pulse_projects_to_minus_sigma_x(self, omega):
        action = project_to_logical(synthesize(schedule_u1(math.pi / 2, omega)), SINGLE_QUBIT_ENCODING)
        assert frobenius_norm(action + SIGMA_X) < 1e-9

    def test_mid_pulse_leaks(self, omega):
        schedule = schedule_u1(math.pi / 3, omega)
        u = propagator_at(schedule, 0.5 * schedule.duration)
        with pytest.raises(LeakageDetected):
            project_to_logical(u, SINGLE_QUBIT_ENCODING)

    def test_synthesized_unitary(self, omega):
        assert unitarity_defect(synthesize(schedule_u2(0.4, omega, omega))) < 1e-10

    def test_dimension_checked(self):
        with pytest.raises(DimensionMismatch):
            project_to_logical(np.eye(4), SINGLE_QUBIT_ENCODING)


class TestCatalog:
    @pytest.mark.parametrize("kind", list(TABLE_GATES) + [GateKind.CNOT])
    def test_gate_realized_with_recorded_phase(self, kind, rates):
        gate = standard_gate(kind)
        schedule, expected = gate_catalog(gate, rates)
        action = logical_action(schedule)
        assert phase_aware_distance(action, expected, gate.global_phase) < 1e-9
        assert schedule.label == kind.value

    def test_group_relations(self, rates):
        s = phased_action(GateKind.S, rates)
        t = phased_action(GateKind.T, rates)
        h = phased_action(GateKind.H, rates)
        z = phased_action(GateKind.Z, rates)
        cz = phased_action(GateKind.CZ, rates)
        assert frobenius_norm(s @ s - z) < 1e-9
        assert frobenius_norm(t @ t - s) < 1e-9
        assert frobenius_norm(h @ h - np.eye(2)) < 1e-9
        assert frobenius_norm(cz @ cz - np.eye(4)) < 1e-9

    def test_two_qubit_gates_use_shared_auxiliary(self, rates):
        schedule, _ = gate_catalog(standard_gate("CZ"), rates)
        assert schedule.encoding == AUXILIARY_TWO_QUBIT_ENCODING

    def test_lookup_is_case_insensitive(self):
        assert standard_gate(" cnot ").kind == GateKind.CNOT

    def test_unknown_gate(self):
        with pytest.raises(UnknownGate):
            standard_gate("SWAP")

    @pytest.mark.parametrize("theta_prime", [-math.pi / 8, math.pi / 3, 0.0])
    def test_zz_phase_follows_its_angle(self, rates, theta_prime):
        gate = StandardGate(kind=GateKind.ZZ_PHASE, parameter=theta_prime)
        schedule, expected = gate_catalog(gate, rates)
        assert frobenius_norm(expected - u4_analytic(theta_prime)) < 1e-15
        assert phase_aware_distance(logical_action(schedule), expected, gate.global_phase) < 1e-9

    def test_zz_phase_default_angle(self, rates):
        _, expected = gate_catalog(StandardGate(kind=GateKind.ZZ_PHASE), rates)
        assert frobenius_norm(expected - u4_analytic(-math.pi / 4)) < 1e-15

    @pytest.mark.parametrize("kind", [GateKind.X, GateKind.S, GateKind.CZ])
    def test_fixed_gate_rejects_other_angle(self, rates, kind):
        with pytest.raises(UnknownGate):
            gate_catalog(StandardGate(kind=kind, parameter=0.3), rates)

    def test_non_finite_angle_rejected(self, rates):
        with pytest.raises(UnknownGate):
            gate_catalog(StandardGate(kind=GateKind.ZZ_PHASE, parameter=math.nan), rates)
