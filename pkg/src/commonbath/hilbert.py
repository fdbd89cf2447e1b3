"""Qubit operators, collective angular-momentum operators and bases.

Conventions fixed here and relied on everywhere else:

* The product basis is ordered lexicographically with ``+`` before ``-``,
  so for two qubits the order is ``++, +-, -+, --``.  ``|+>`` and ``|->``
  are the sigma_z eigenstates with eigenvalues +1 and -1.
* ``sigma_plus = |+><-|`` raises an excitation; the collective lowering
  operator ``J_minus`` therefore describes decay (loss of ``+`` population).
* The collective (total angular momentum) bases carry the exact
  Clebsch-Gordan sign pattern, so coefficient-level comparisons against the
  closed-form solutions are meaningful, not only phase-insensitive measures.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, reduce
from math import sqrt

import numpy as np

from .errors import InvalidInputError
from .linalg import dagger, kron

UNITARITY_TOL = 1e-12


@dataclass(frozen=True)
class ModelParams:
    """Model parameters: qubit count, dipole coupling g, collective decay gamma.

    Time is dimensionless; g and gamma are rates (hbar = 1).
    """

    n_qubits: int
    g: float
    gamma: float

    def __post_init__(self):
        if self.n_qubits not in (2, 3):
            raise InvalidInputError(
                f"n_qubits must be 2 or 3, got {self.n_qubits}"
            )
        for name in ("g", "gamma"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise InvalidInputError(f"{name} must be finite and >= 0, got {value}")

    @property
    def dim(self) -> int:
        return 2 ** self.n_qubits


@dataclass(frozen=True)
class ProductBasis:
    """Lexicographic +/- labels of the qubit product basis."""

    n_qubits: int
    labels: tuple[str, ...]


@dataclass(frozen=True)
class DensityMatrix:
    """A density matrix together with the basis its entries refer to."""

    matrix: np.ndarray
    basis: str = "product"  # "product" | "collective"

    def __post_init__(self):
        if self.basis not in ("product", "collective"):
            raise InvalidInputError(f"unknown basis tag {self.basis!r}")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_qubits(self) -> int:
        return self.dim.bit_length() - 1

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)


def density_matrix(
    matrix: np.ndarray,
    basis: str = "product",
    herm_tol: float = 1e-8,
    trace_tol: float = 1e-8,
    eig_floor: float = -1e-7,
) -> DensityMatrix:
    """Validate and wrap a matrix as a density matrix.

    Checks Hermiticity, unit trace and positivity (allowing round-off sized
    negative eigenvalues down to ``eig_floor``).
    """
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InvalidInputError(f"density matrix must be square, got {matrix.shape}")
    if np.max(np.abs(matrix - dagger(matrix))) > herm_tol:
        raise InvalidInputError("density matrix is not Hermitian")
    tr = np.trace(matrix)
    if abs(tr - 1.0) > trace_tol:
        raise InvalidInputError(f"density matrix trace {tr:.6g} is not 1")
    min_eig = float(np.linalg.eigvalsh((matrix + dagger(matrix)) / 2).min())
    if min_eig < eig_floor:
        raise InvalidInputError(
            f"density matrix has negative eigenvalue {min_eig:.3e}"
        )
    return DensityMatrix(matrix, basis)


def product_basis(n_qubits: int) -> ProductBasis:
    if n_qubits < 1:
        raise InvalidInputError("n_qubits must be >= 1")
    labels = [""]
    for _ in range(n_qubits):
        labels = [s + c for s in labels for c in "+-"]
    return ProductBasis(n_qubits, tuple(labels))


_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
    "plus": np.array([[0, 1], [0, 0]], dtype=complex),
    "minus": np.array([[0, 0], [1, 0]], dtype=complex),
}


def pauli(which: str) -> np.ndarray:
    """Single-qubit Pauli / ladder operator in the {|+>, |->} ordering."""
    try:
        return _PAULI[which].copy()
    except KeyError:
        raise InvalidInputError(f"unknown Pauli label {which!r}")


def embed(op: np.ndarray, site: int, n_qubits: int) -> np.ndarray:
    """Single-site operator acting on ``site`` (1-based) of an n-qubit register."""
    op = np.asarray(op, dtype=complex)
    if op.shape != (2, 2):
        raise InvalidInputError(f"expected a 2x2 operator, got {op.shape}")
    if not 1 <= site <= n_qubits:
        raise InvalidInputError(f"site {site} out of range for {n_qubits} qubits")
    eye = np.eye(2, dtype=complex)
    factors = [op if k == site else eye for k in range(1, n_qubits + 1)]
    return reduce(kron, factors)


def collective_ops(n_qubits: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Collective ladder and z operators (J+, J-, Jz) in the product basis."""
    if n_qubits < 1:
        raise InvalidInputError("n_qubits must be >= 1")
    dim = 2 ** n_qubits
    jplus = np.zeros((dim, dim), dtype=complex)
    jz = np.zeros((dim, dim), dtype=complex)
    for site in range(1, n_qubits + 1):
        jplus += embed(pauli("plus"), site, n_qubits)
        jz += embed(pauli("z"), site, n_qubits) / 2.0
    return jplus, dagger(jplus), jz


@dataclass(frozen=True)
class CollectiveBasis:
    """Total-angular-momentum basis with its change-of-basis unitary.

    ``transform`` columns are the collective states expressed in product-basis
    coordinates, ordered like ``labels``.  Labels are (j, m) tuples for two
    qubits and (j12, j, m) tuples for three.
    """

    n_qubits: int
    labels: tuple[tuple[float, ...], ...]
    transform: np.ndarray

    def index(self, label: tuple[float, ...]) -> int:
        try:
            return self.labels.index(tuple(float(x) for x in label))
        except ValueError:
            raise InvalidInputError(f"no collective state labelled {label}")

    def column(self, label: tuple[float, ...]) -> np.ndarray:
        """Product-basis coordinates of one collective state."""
        return self.transform[:, self.index(label)].copy()

    def to_collective(self, op: np.ndarray) -> np.ndarray:
        return dagger(self.transform) @ op @ self.transform

    def to_product(self, op: np.ndarray) -> np.ndarray:
        return self.transform @ op @ dagger(self.transform)


def _basis_vector(dim: int, index: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


@lru_cache(maxsize=None)
def collective_basis(n_qubits: int) -> CollectiveBasis:
    """The exact singlet/triplet (N=2) or coupled (N=3) basis.

    Treat the returned arrays as read-only; instances are cached.
    """
    if n_qubits == 2:
        # product order: ++, +-, -+, --
        e = [_basis_vector(4, k) for k in range(4)]
        s = 1 / sqrt(2)
        labels = ((0.0, 0.0), (1.0, 1.0), (1.0, 0.0), (1.0, -1.0))
        columns = [
            s * (e[1] - e[2]),  # singlet
            e[0],
            s * (e[1] + e[2]),
            e[3],
        ]
    elif n_qubits == 3:
        # product order: +++, ++-, +-+, +--, -++, -+-, --+, ---
        e = [_basis_vector(8, k) for k in range(8)]
        r3, r6, r2 = 1 / sqrt(3), 1 / sqrt(6), 1 / sqrt(2)
        labels = (
            (1.0, 1.5, 1.5),
            (1.0, 1.5, -1.5),
            (1.0, 1.5, 0.5),
            (1.0, 1.5, -0.5),
            (1.0, 0.5, 0.5),
            (1.0, 0.5, -0.5),
            (0.0, 0.5, 0.5),
            (0.0, 0.5, -0.5),
        )
        columns = [
            e[0],
            e[7],
            r3 * (e[1] + e[2] + e[4]),
            r3 * (e[3] + e[5] + e[6]),
            r6 * (2 * e[1] - e[2] - e[4]),
            r6 * (e[3] + e[5] - 2 * e[6]),
            r2 * (e[2] - e[4]),
            r2 * (e[3] - e[5]),
        ]
    else:
        raise InvalidInputError(
            f"collective basis is only shipped for 2 or 3 qubits, got {n_qubits}"
        )
    transform = np.column_stack(columns)
    assert np.max(np.abs(dagger(transform) @ transform - np.eye(len(columns)))) < UNITARITY_TOL
    return CollectiveBasis(n_qubits, labels, transform)


def interaction_hamiltonian(params: ModelParams) -> np.ndarray:
    """Dipole-dipole interaction g (J+ J- - Jz - N/2) in the product basis.

    Identical to the pairwise form sum_{i>j} g (sigma+_i sigma-_j + h.c.).
    """
    jplus, jminus, jz = collective_ops(params.n_qubits)
    dim = 2 ** params.n_qubits
    return params.g * (jplus @ jminus - jz - (params.n_qubits / 2.0) * np.eye(dim))


def product_state(label: str) -> DensityMatrix:
    """Projector onto a product basis state given as a +/- string."""
    if not label or any(c not in "+-" for c in label):
        raise InvalidInputError(f"state label must be a nonempty +/- string, got {label!r}")
    index = int(label.replace("+", "0").replace("-", "1"), 2)
    dim = 2 ** len(label)
    rho = np.zeros((dim, dim), dtype=complex)
    rho[index, index] = 1.0
    return DensityMatrix(rho, "product")


def werner_state(p: float, sign: str) -> DensityMatrix:
    """Werner mixture (1-p) I/4 + p |Psi_pm><Psi_pm| of two qubits.

    ``sign`` selects the triplet ("+", symmetric) or singlet ("-",
    antisymmetric) Bell component; p in [-1/3, 1] is the Bell-state fidelity.
    """
    if sign not in ("+", "-"):
        raise InvalidInputError(f"sign must be '+' or '-', got {sign!r}")
    if not -1 / 3 <= p <= 1:
        raise InvalidInputError(f"Werner parameter p={p} outside [-1/3, 1]")
    psi = np.zeros(4, dtype=complex)
    psi[1] = 1 / sqrt(2)
    psi[2] = (1 if sign == "+" else -1) / sqrt(2)
    rho = (1 - p) * np.eye(4, dtype=complex) / 4 + p * np.outer(psi, psi.conj())
    return DensityMatrix(rho, "product")


def excitation_count(rho_product: np.ndarray, support_tol: float = 1e-12) -> int:
    """Largest number of excited (+) qubits present in the state's support."""
    rho_product = np.asarray(rho_product)
    n = rho_product.shape[0].bit_length() - 1
    best = 0
    for index in range(rho_product.shape[0]):
        if rho_product[index, index].real > support_tol:
            best = max(best, n - bin(index).count("1"))
    return best
