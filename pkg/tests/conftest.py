import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_density(rng, dim):
    """Full-rank random density matrix (normalized Wishart)."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


def random_pure(rng, dim):
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    v /= np.linalg.norm(v)
    return np.outer(v, v.conj())


def random_unitary(rng, dim):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_separable(rng, n_qubits, n_terms=4):
    """Random convex mixture of product states."""
    dim = 2 ** n_qubits
    rho = np.zeros((dim, dim), dtype=complex)
    weights = rng.dirichlet(np.ones(n_terms))
    for w in weights:
        factors = [random_pure(rng, 2) for _ in range(n_qubits)]
        term = factors[0]
        for f in factors[1:]:
            term = np.kron(term, f)
        rho += w * term
    return rho
