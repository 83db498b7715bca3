import math

import numpy as np
import pytest
import scipy.linalg

from app.core.errors import DimensionMismatch, NotHermitian
from app.logical.encoding import SINGLE_QUBIT_ENCODING
from app.numerics.linalg import (
    dagger,
    eig_hermitian,
    expm_hermitian,
    frobenius_norm,
    kron,
    unitarity_defect,
)
from app.numerics.metrics import (
    haar_random_state,
    phase_aware_distance,
    process_fidelity,
    state_fidelity,
    trial_rng,
    unitary_error,
)
from app.numerics.propagation import (
    SplitHamiltonian,
    convergence_error,
    propagate_split,
    propagate_time_dependent,
)
from app.spin.hamiltonians import build_xy_hamiltonian, h1_params, h2_params
from app.spin.operators import IDENTITY, SIGMA_MINUS, SIGMA_PLUS, SIGMA_X, SIGMA_Z


class TestEigHermitian:
    def test_diagonal_input_sorted(self):
        evals, evecs = eig_hermitian(np.diag([2.0, 1.0]))
        assert np.allclose(evals, [1.0, 2.0])
        assert np.allclose(np.abs(evecs), [[0, 1], [1, 0]])

    def test_pauli_x_spectrum(self):
        evals, _ = eig_hermitian(SIGMA_X)
        assert np.allclose(evals, [-1.0, 1.0])

    def test_exchange_spectrum_is_symmetric(self):
        h = build_xy_hamiltonian(h1_params(math.pi / 2, math.sqrt(2.0)))
        evals, evecs = eig_hermitian(h)
        assert np.allclose(evals, -evals[::-1], atol=1e-12)
        assert frobenius_norm(h @ evecs - evecs @ np.diag(evals)) < 1e-10
        assert unitarity_defect(evecs) < 1e-10

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitian):
            eig_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_rejects_non_square(self):
        with pytest.raises(DimensionMismatch):
            eig_hermitian(np.zeros((2, 3)))


class TestExpmHermitian:
    def test_zero_time_is_identity(self, rng):
        a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        assert np.allclose(expm_hermitian(a + dagger(a), 0.0), np.eye(4))

    def test_sigma_z_quarter_turn(self):
        u = expm_hermitian(SIGMA_Z, math.pi / 2)
        assert np.allclose(u, np.diag([np.exp(-1j * math.pi / 2), np.exp(1j * math.pi / 2)]))

    def test_group_property(self, rng):
        a = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        h = a + dagger(a)
        combined = expm_hermitian(h, 0.3) @ expm_hermitian(h, 0.45)
        assert frobenius_norm(combined - expm_hermitian(h, 0.75)) < 1e-9

    def test_pair_exchange_on_logical_span(self):
        v = SINGLE_QUBIT_ENCODING.isometry()
        u = expm_hermitian(build_xy_hamiltonian(h2_params(1.0)), math.pi / 4)
        expected = scipy.linalg.expm(-1j * (math.pi / 4) * SIGMA_X)
        assert frobenius_norm(dagger(v) @ u @ v - expected) < 1e-10

    def test_result_is_unitary_for_large_phases(self, rng):
        a = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
        assert unitarity_defect(expm_hermitian(1e9 * (a + dagger(a)), 3.7e-3)) < 1e-10


class TestKron:
    def test_identities(self):
        assert np.array_equal(kron(IDENTITY, IDENTITY), np.eye(4))

    def test_sigma_z_on_first_factor(self):
        assert np.allclose(kron(SIGMA_Z, IDENTITY), np.diag([1, 1, -1, -1]))

    def test_raising_lowering_pattern(self):
        product = kron(SIGMA_PLUS, SIGMA_MINUS)
        expected = np.zeros((4, 4))
        expected[1, 2] = 1.0  # |01⟩⟨10|
        assert np.array_equal(product, expected)


class TestPropagateTimeDependent:
    def test_constant_hamiltonian_matches_expm(self, rng):
        a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        h = a + dagger(a)
        u = propagate_time_dependent(lambda t: h, 0.0, 1.3, 3)
        assert frobenius_norm(u - expm_hermitian(h, 1.3)) < 1e-10

    def test_commuting_family_returns_to_identity(self):
        u = propagate_time_dependent(lambda t: math.cos(t) * SIGMA_X, 0.0, 2 * math.pi, 200)
        assert frobenius_norm(u - np.eye(2)) < 1e-8
        assert unitarity_defect(u) < 1e-8

    def test_fourth_order_self_convergence(self):
        def h_of_t(t):
            return SIGMA_Z + math.cos(3.0 * t) * SIGMA_X

        coarse = convergence_error(h_of_t, 0.0, 2.0, 20)
        fine = convergence_error(h_of_t, 0.0, 2.0, 40)
        assert coarse / fine >= 8.0

    def test_dimension_change_is_rejected(self):
        def h_of_t(t):
            return np.eye(2) if t < 0.5 else np.eye(3)

        with pytest.raises(DimensionMismatch):
            propagate_time_dependent(h_of_t, 0.0, 1.0, 4)

    def test_steps_must_be_positive(self):
        with pytest.raises(ValueError):
            propagate_time_dependent(lambda t: SIGMA_Z, 0.0, 1.0, 0)


class TestPropagateSplit:
    @pytest.fixture
    def split_case(self, rng):
        q, _ = np.linalg.qr(rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
        static = np.array([0.0, 1.0, 3.0])
        weights = np.array([0.4, -0.2, 0.1])

        ham = SplitHamiltonian(
            static_energies=static,
            to_kick_basis=lambda psi: q @ psi,
            from_kick_basis=lambda psi: dagger(q) @ psi,
            kick_energies=lambda t: math.cos(2.0 * t) * weights,
        )

        def dense(t):
            return np.diag(static) + dagger(q) @ np.diag(math.cos(2.0 * t) * weights) @ q

        return ham, dense

    def test_matches_dense_propagator(self, split_case):
        ham, dense = split_case
        reference = propagate_time_dependent(dense, 0.0, 3.0, 400)
        columns = propagate_split(ham, np.eye(3), 0.0, 3.0, 400)
        assert frobenius_norm(columns - reference) < 1e-6

    def test_single_state_keeps_shape_and_norm(self, split_case):
        ham, _ = split_case
        psi = np.array([1.0, 0.0, 0.0], dtype=np.complex128)
        out = propagate_split(ham, psi, 0.0, 1.0, 50)
        assert out.shape == (3,)
        assert abs(np.linalg.norm(out) - 1.0) < 1e-12

    def test_state_dimension_checked(self, split_case):
        ham, _ = split_case
        with pytest.raises(DimensionMismatch):
            propagate_split(ham, np.ones(4), 0.0, 1.0, 10)


class TestMetrics:
    def test_process_fidelity_ignores_global_phase(self, rng):
        u = scipy.linalg.expm(-1j * kron(SIGMA_X, SIGMA_Z))
        assert process_fidelity(u, np.exp(0.7j) * u) == pytest.approx(1.0, abs=1e-12)

    def test_unitary_error_zero_up_to_phase_and_linear_in_angle(self):
        u = np.eye(2, dtype=np.complex128)
        assert unitary_error(u, -1j * u) < 1e-15
        small = expm_hermitian(SIGMA_X, 1e-6)
        assert unitary_error(u, small) == pytest.approx(1e-6, rel=1e-3)

    def test_phase_aware_distance_keeps_phase(self):
        assert phase_aware_distance(-SIGMA_X, SIGMA_X, global_phase=-1.0) == 0.0
        assert phase_aware_distance(-SIGMA_X, SIGMA_X) == pytest.approx(2.0 * math.sqrt(2.0))

    def test_haar_state_normalized(self, rng):
        psi = haar_random_state(8, rng)
        assert abs(np.linalg.norm(psi) - 1.0) < 1e-12
        assert state_fidelity(psi, psi) == pytest.approx(1.0)

    def test_trial_rng_is_pure(self):
        a = haar_random_state(4, trial_rng(7, 3))
        b = haar_random_state(4, trial_rng(7, 3))
        c = haar_random_state(4, trial_rng(7, 4))
        assert np.array_equal(a, b)
        assert not np.allclose(a, c)

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatch):
            process_fidelity(np.eye(2), np.eye(4))
