import numpy as np
import pytest
import scipy.linalg

from commonbath import linalg
from commonbath.closedform import ClosedFormSolution, Scenario, rho_exact
from commonbath.dynamics import effective_hamiltonian
from commonbath.errors import InvalidInputError
from commonbath.hilbert import ModelParams, collective_basis, collective_ops, pauli

from conftest import random_density, random_unitary

I2 = np.eye(2)


class TestKron:
    def test_identity(self):
        assert linalg.max_abs_diff(linalg.kron(I2, I2), np.eye(4)) == 0

    def test_diagonal_tensor(self):
        out = linalg.kron(pauli("z"), I2)
        assert linalg.max_abs_diff(out, np.diag([1, 1, -1, -1])) == 0

    def test_spin_flip_matrix(self):
        # sigma_y x sigma_y expanded by hand: antidiagonal (-1, 1, 1, -1)
        expected = np.array(
            [[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=complex
        )
        assert linalg.max_abs_diff(linalg.kron(pauli("y"), pauli("y")), expected) < 1e-15

    def test_associativity_and_mixed_product(self, rng):
        for _ in range(10):
            a, b, c, d = (
                rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
                for _ in range(4)
            )
            left = linalg.kron(linalg.kron(a, b), c)
            right = linalg.kron(a, linalg.kron(b, c))
            assert linalg.max_abs_diff(left, right) <= 1e-10
            prod = linalg.kron(a, b) @ linalg.kron(c, d)
            assert linalg.max_abs_diff(prod, linalg.kron(a @ c, b @ d)) <= 1e-10


class TestExpm:
    def test_zero_matrix(self):
        assert linalg.max_abs_diff(linalg.expm(np.zeros((3, 3))), np.eye(3)) < 1e-15

    def test_diagonal(self):
        out = linalg.expm(np.diag([0.3 + 1j, -2.0]))
        assert linalg.max_abs_diff(out, np.diag(np.exp([0.3 + 1j, -2.0]))) < 1e-14

    def test_non_hermitian_generator_vs_eigendecomposition(self):
        # independent oracle: V exp(D) V^-1 on a non-degenerate instance
        h_eff = effective_hamiltonian(ModelParams(2, 1.0, 0.1))
        m = -1j * h_eff * 1.0
        values, vectors = np.linalg.eig(m)
        oracle = vectors @ np.diag(np.exp(values)) @ np.linalg.inv(vectors)
        assert linalg.max_abs_diff(linalg.expm(m), oracle) <= 1e-9

    def test_inverse_property(self, rng):
        for _ in range(10):
            m = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
            m *= 10.0 / np.linalg.norm(m)
            prod = linalg.expm(m) @ linalg.expm(-m)
            assert linalg.max_abs_diff(prod, np.eye(5)) <= 1e-8

    def test_high_norm_accuracy(self, rng):
        # normal matrix with norm ~80, where U exp(D) U^dagger is exact
        u = random_unitary(rng, 6)
        d = rng.uniform(-80, 5, 6) + 1j * rng.uniform(-80, 80, 6)
        m = u @ np.diag(d) @ u.conj().T
        oracle = u @ np.diag(np.exp(d)) @ u.conj().T
        rel = linalg.max_abs_diff(linalg.expm(m), oracle) / np.max(np.abs(oracle))
        assert rel <= 1e-10

    def test_unitary_similarity(self, rng):
        for _ in range(5):
            m = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
            u = random_unitary(rng, 4)
            direct = linalg.expm(u @ m @ u.conj().T)
            conjugated = u @ linalg.expm(m) @ u.conj().T
            assert linalg.max_abs_diff(direct, conjugated) <= 1e-8

    def test_empty_matrix_rejected(self):
        with pytest.raises(InvalidInputError):
            linalg.expm(np.zeros((0, 0)))


class TestEigHermitian:
    def test_identity(self):
        out = linalg.eig_hermitian(np.eye(4))
        assert np.allclose(out.values, 1.0)

    def test_pauli_spectrum(self):
        out = linalg.eig_hermitian(pauli("x"))
        assert np.allclose(out.values, [1.0, -1.0])

    def test_partial_transpose_of_singlet(self):
        # hand-built partial transpose of the singlet projector
        m = np.array(
            [
                [0, 0, 0, -0.5],
                [0, 0.5, 0, 0],
                [0, 0, 0.5, 0],
                [-0.5, 0, 0, 0],
            ],
            dtype=complex,
        )
        out = linalg.eig_hermitian(m)
        assert np.allclose(out.values, [0.5, 0.5, 0.5, -0.5], atol=1e-12)

    def test_reconstruction_and_order(self, rng):
        for _ in range(10):
            m = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
            m = (m + m.conj().T) / 2
            values, vectors = linalg.eig_hermitian(m)
            rebuilt = vectors @ np.diag(values) @ vectors.conj().T
            assert linalg.max_abs_diff(rebuilt, m) <= 1e-9
            assert np.all(np.diff(values) <= 1e-12)
            gram = vectors.conj().T @ vectors
            assert linalg.max_abs_diff(gram, np.eye(6)) <= 1e-10

    def test_rejects_non_hermitian(self):
        with pytest.raises(InvalidInputError):
            linalg.eig_hermitian(np.array([[0, 1], [0, 0]], dtype=complex))


class TestEigGeneral:
    def test_diagonal_complex(self):
        out = linalg.eig_general(np.diag([1.0, 2.0 + 1j]))
        assert sorted(out.values, key=abs) == pytest.approx([1.0, 2.0 + 1j])

    def test_collective_lowering_is_nilpotent(self):
        cb = collective_basis(2)
        _, jminus, _ = collective_ops(2)
        out = linalg.eig_general(cb.to_collective(jminus))
        assert np.max(np.abs(out.values)) <= 1e-12

    def test_eigenvector_residual(self, rng):
        for _ in range(10):
            m = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
            values, vectors = linalg.eig_general(m)
            residual = m @ vectors - vectors * values
            assert np.max(np.abs(residual)) <= 1e-8 * np.linalg.norm(m)


class TestSqrtmPsd:
    def test_identity(self):
        assert linalg.max_abs_diff(linalg.sqrtm_psd(np.eye(3)), np.eye(3)) < 1e-14

    def test_diagonal(self):
        out = linalg.sqrtm_psd(np.diag([4.0, 9.0]))
        assert linalg.max_abs_diff(out, np.diag([2.0, 3.0])) < 1e-14

    def test_against_schur_sqrtm_on_evolved_state(self):
        # cross-check two independent square-root algorithms on rho(t) at
        # gamma t = 0.5 of the exactly solvable |+-> evolution
        params = ModelParams(2, 1.0, 0.1)
        rho = rho_exact(
            ClosedFormSolution(Scenario.TWO_QUBIT_PLUS_MINUS, params), 5.0
        ).matrix
        oracle = scipy.linalg.sqrtm(rho)
        assert linalg.max_abs_diff(linalg.sqrtm_psd(rho), oracle) <= 1e-9

    def test_square_recovers_input(self, rng):
        for _ in range(10):
            rho = random_density(rng, 5)
            root = linalg.sqrtm_psd(rho)
            assert linalg.max_abs_diff(root @ root, rho) <= 1e-8
            assert linalg.is_hermitian(root, 1e-12)

    def test_rejects_indefinite(self):
        with pytest.raises(InvalidInputError):
            linalg.sqrtm_psd(np.diag([1.0, -1e-3]))


class TestNullSpace:
    def test_identity_has_empty_null_space(self):
        assert linalg.null_space(np.eye(4), tol=1e-10) == []

    def test_single_zero_mode(self):
        vectors = linalg.null_space(np.diag([0.0, 1.0, 2.0, 3.0]), tol=1e-10)
        assert len(vectors) == 1
        overlap = abs(vectors[0] @ np.array([1, 0, 0, 0]))
        assert overlap == pytest.approx(1.0, abs=1e-12)

    def test_zero_matrix_gives_full_basis(self):
        vectors = linalg.null_space(np.zeros((3, 3)), tol=1e-10)
        assert len(vectors) == 3

    def test_orthonormal_and_annihilated(self, rng):
        # rank-4 6x6 matrix, so the right null space is exactly 2-dimensional
        basis = np.linalg.qr(rng.standard_normal((6, 4)) + 1j * rng.standard_normal((6, 4)))[0]
        m = (rng.standard_normal((6, 4)) + 1j * rng.standard_normal((6, 4))) @ basis.conj().T
        vectors = linalg.null_space(m, tol=1e-10)
        assert len(vectors) == 2
        for v in vectors:
            assert np.linalg.norm(m @ v) <= 1e-10 * np.linalg.norm(m)
        gram = np.array([[u.conj() @ v for v in vectors] for u in vectors])
        assert linalg.max_abs_diff(gram, np.eye(2)) <= 1e-10

    def test_requires_positive_tolerance(self):
        with pytest.raises(InvalidInputError):
            linalg.null_space(np.eye(2), tol=0.0)
