import numpy as np
import pytest

from qdlab import qmath
from conftest import random_density, random_hermitian, random_state, random_unitary


class TestHermEig:
    def test_sigma_z_spectrum(self):
        w, _ = qmath.herm_eig(qmath.SIGMA_Z)
        np.testing.assert_allclose(w, [-1.0, 1.0], atol=1e-14)

    def test_unit_axis_spectrum(self, rng):
        a = random_state(rng, 3).real
        a /= np.linalg.norm(a)
        w, _ = qmath.herm_eig(qmath.axis_operator(a))
        np.testing.assert_allclose(w, [-1.0, 1.0], atol=1e-12)

    def test_reconstruction_residual(self, rng):
        M = random_hermitian(rng, 6)
        w, V = qmath.herm_eig(M)
        residual = np.max(np.abs(M - (V * w) @ V.conj().T))
        assert residual < 1e-10
        assert np.all(np.diff(w) >= 0)
        np.testing.assert_allclose(V.conj().T @ V, np.eye(6), atol=1e-12)

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            qmath.herm_eig(np.zeros((2, 3)))
        with pytest.raises(ValueError):
            qmath.herm_eig(np.zeros((0, 0)))


class TestExpmI:
    def test_zero_hamiltonian(self):
        for t in (0.0, 1.7, -42.0):
            np.testing.assert_allclose(qmath.expm_i(np.zeros((3, 3)), t), np.eye(3), atol=1e-14)

    def test_axis_rotation_form(self, rng):
        # exp(-i t a.sigma) = cos t I - i sin t a.sigma for a unit axis.
        a = rng.normal(size=3)
        a /= np.linalg.norm(a)
        t = 0.83
        expected = np.cos(t) * np.eye(2) - 1j * np.sin(t) * qmath.axis_operator(a)
        np.testing.assert_allclose(qmath.expm_i(qmath.axis_operator(a), t), expected, atol=1e-12)

    def test_diagonal_quarter_turn(self):
        np.testing.assert_allclose(
            qmath.expm_i(qmath.SIGMA_Z, np.pi / 2), np.diag([-1j, 1j]), atol=1e-14
        )

    def test_inverse_property(self, rng):
        for dim in (2, 3, 5):
            H = random_hermitian(rng, dim)
            t = rng.uniform(0.1, 7.0)
            U = qmath.expm_i(H, t) @ qmath.expm_i(H, -t)
            assert np.max(np.abs(U - np.eye(dim))) < 1e-10

    def test_result_unitary(self, rng):
        H = random_hermitian(rng, 4)
        assert qmath.is_unitary(qmath.expm_i(H, 2.31))


class TestUnitaryArgs:
    def test_identity(self):
        np.testing.assert_allclose(qmath.unitary_args(np.eye(5)), np.zeros(5), atol=1e-12)

    def test_constructed_diagonal(self):
        U = np.diag([np.exp(1j * np.pi / 3), np.exp(-1j * np.pi / 4)])
        np.testing.assert_allclose(qmath.unitary_args(U), [-np.pi / 4, np.pi / 3], atol=1e-12)

    def test_matches_generator_spectrum(self, rng):
        # For U = exp(-i B) with ||B|| < pi the arguments are -eigenvalues.
        B = random_hermitian(rng, 5)
        B *= 0.9 * np.pi / np.max(np.abs(np.linalg.eigvalsh(B)))
        args = qmath.unitary_args(qmath.expm_i(B, 1.0))
        w, _ = qmath.herm_eig(B)
        np.testing.assert_allclose(args, np.sort(-w), atol=1e-10)

    def test_branch_fold(self):
        np.testing.assert_allclose(qmath.unitary_args(np.diag([-1.0 + 0j])), [np.pi])

    def test_adjoint_negates(self, rng):
        U = random_unitary(rng, 4)
        args = qmath.unitary_args(U)
        if np.min(np.abs(np.abs(args) - np.pi)) < 1e-9:
            pytest.skip("argument on the branch cut")
        np.testing.assert_allclose(
            qmath.unitary_args(U.conj().T), -args[::-1], atol=1e-10
        )

    def test_rejects_nonunitary(self):
        with pytest.raises(ValueError):
            qmath.unitary_args(np.diag([2.0, 1.0]))


class TestTensor:
    def test_product_state(self):
        psi = qmath.tensor(qmath.KET_PLUS, qmath.KET_0)
        np.testing.assert_allclose(psi, [1 / np.sqrt(2), 0, 1 / np.sqrt(2), 0], atol=1e-14)

    def test_bell_state_construction(self):
        phi = (qmath.tensor(qmath.KET_0, qmath.KET_0) + qmath.tensor(qmath.KET_1, qmath.KET_1)) / np.sqrt(2)
        np.testing.assert_allclose(phi, qmath.BELL_PHI_PLUS, atol=1e-14)

    def test_mixed_product_rule(self, rng):
        A, B, C, D = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(4))
        lhs = qmath.tensor(A, B) @ qmath.tensor(C, D)
        rhs = qmath.tensor(A @ C, B @ D)
        np.testing.assert_allclose(lhs, rhs, atol=1e-12)


class TestPartialTrace:
    def test_bell_reduction(self):
        rho = np.outer(qmath.BELL_PHI_PLUS, qmath.BELL_PHI_PLUS.conj())
        np.testing.assert_allclose(
            qmath.partial_trace(rho, [2, 2], [0]), np.eye(2) / 2, atol=1e-14
        )

    def test_product_reduction(self, rng):
        rho_a = random_density(rng, 2)
        rho_b = random_density(rng, 3)
        reduced = qmath.partial_trace(qmath.tensor(rho_a, rho_b), [2, 3], [0])
        np.testing.assert_allclose(reduced, rho_a, atol=1e-12)

    def test_against_index_sum_oracle(self, rng):
        rho = random_density(rng, 4)
        # Explicit double sum for tracing out the second qubit.
        expected = np.zeros((2, 2), dtype=complex)
        for i in range(2):
            for j in range(2):
                for k in range(2):
                    expected[i, j] += rho[2 * i + k, 2 * j + k]
        np.testing.assert_allclose(qmath.partial_trace(rho, [2, 2], [0]), expected, atol=1e-13)

    def test_trace_preserved_and_positive(self, rng):
        for dims, keep in (([2, 2], [1]), ([2, 2, 2], [0, 2]), ([2, 3], [1])):
            rho = random_density(rng, int(np.prod(dims)))
            reduced = qmath.partial_trace(rho, dims, keep)
            assert abs(np.trace(reduced) - 1.0) < 1e-10
            assert np.linalg.eigvalsh(reduced).min() > -1e-10

    def test_rejects_bad_dims(self):
        with pytest.raises(ValueError):
            qmath.partial_trace(np.eye(4) / 4, [2, 3], [0])


class TestTraceNorm:
    def test_sigma_z(self):
        assert qmath.trace_norm(qmath.SIGMA_Z) == pytest.approx(2.0, abs=1e-14)

    def test_orthogonal_pure_difference(self):
        # Half the difference of orthogonal projectors has trace norm 1.
        M = 0.5 * np.diag([1.0, -1.0])
        assert qmath.trace_norm(M) == pytest.approx(1.0, abs=1e-14)

    def test_matches_eigenvalue_sum(self, rng):
        M = random_hermitian(rng, 5)
        expected = np.sum(np.abs(np.linalg.eigvalsh(M)))
        assert qmath.trace_norm(M) == pytest.approx(expected, abs=1e-11)

    def test_norm_axioms(self, rng):
        for _ in range(20):
            A = random_hermitian(rng, 4)
            B = random_hermitian(rng, 4)
            assert qmath.trace_norm(A + B) <= qmath.trace_norm(A) + qmath.trace_norm(B) + 1e-9
            c = rng.normal()
            assert qmath.trace_norm(c * A) == pytest.approx(abs(c) * qmath.trace_norm(A), abs=1e-9)


class TestRoleValidators:
    def test_hermitian(self, rng):
        assert qmath.is_hermitian(random_hermitian(rng, 4))
        assert not qmath.is_hermitian(np.array([[0, 1], [0, 0]], dtype=complex))

    def test_unitary(self, rng):
        assert qmath.is_unitary(random_unitary(rng, 3))
        assert not qmath.is_unitary(np.diag([1.0, 0.5]))

    def test_density(self, rng):
        assert qmath.is_density(random_density(rng, 3))
        assert not qmath.is_density(np.diag([1.5, -0.5]))  # trace 1 but not positive
        assert not qmath.is_density(np.eye(2))  # positive but trace 2

    def test_state_norm_gate(self):
        qmath.check_state(qmath.KET_PLUS)
        with pytest.raises(ValueError):
            qmath.check_state(np.array([1.0, 1.0]))


class TestBlochConversions:
    def test_center_is_maximally_mixed(self):
        np.testing.assert_allclose(qmath.bloch_to_density([0, 0, 0]), np.eye(2) / 2, atol=1e-15)

    def test_x_axis(self):
        np.testing.assert_allclose(
            qmath.bloch_to_density([1, 0, 0]), 0.5 * (np.eye(2) + qmath.SIGMA_X), atol=1e-15
        )

    def test_roundtrip(self, rng):
        for _ in range(20):
            rho = random_density(rng, 2)
            back = qmath.bloch_to_density(qmath.density_to_bloch(rho))
            assert np.max(np.abs(back - rho)) < 1e-12
        P = rng.normal(size=3)
        P = 0.9 * P / np.linalg.norm(P)
        np.testing.assert_allclose(qmath.density_to_bloch(qmath.bloch_to_density(P)), P, atol=1e-12)

    def test_rejects_long_vector(self):
        with pytest.raises(ValueError):
            qmath.bloch_to_density([1.1, 0, 0])
